#include "omni/vio/feature_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace omni {

std::vector<Vec2> detect_features(const Image& img, const std::vector<Vec2>& existing,
                                  const DetectParams& params) {
  const int w = img.width;
  const int h = img.height;
  if (w < 8 || h < 8) return {};

  // Central-difference gradients.
  std::vector<float> ix(size_t(w) * h, 0.0f), iy(size_t(w) * h, 0.0f);
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      ix[size_t(y) * w + x] = 0.5f * (float(img.at(x + 1, y)) - float(img.at(x - 1, y)));
      iy[size_t(y) * w + x] = 0.5f * (float(img.at(x, y + 1)) - float(img.at(x, y - 1)));
    }
  }

  // Minimum-eigenvalue response over the block window.
  const int half = params.block_size / 2;
  std::vector<float> response(size_t(w) * h, 0.0f);
  float max_response = 0.0f;
  const int border = std::max(params.border, half + 1);
  for (int y = border; y + border < h; ++y) {
    for (int x = border; x + border < w; ++x) {
      double a = 0.0, b = 0.0, c = 0.0;
      for (int dy = -half; dy <= half; ++dy)
        for (int dx = -half; dx <= half; ++dx) {
          const float gx = ix[size_t(y + dy) * w + x + dx];
          const float gy = iy[size_t(y + dy) * w + x + dx];
          a += gx * gx;
          b += gx * gy;
          c += gy * gy;
        }
      const double area = double(params.block_size) * params.block_size;
      a /= area;
      b /= area;
      c /= area;
      const double min_eig = 0.5 * ((a + c) - std::sqrt((a - c) * (a - c) + 4.0 * b * b));
      response[size_t(y) * w + x] = float(min_eig);
      max_response = std::max(max_response, float(min_eig));
    }
  }

  const float threshold =
      std::max(float(params.quality_level) * max_response, float(params.min_response));

  // Non-maximum suppression, then greedy spacing.
  struct Candidate {
    float resp;
    int x, y;
  };
  std::vector<Candidate> candidates;
  for (int y = border; y + border < h; ++y) {
    for (int x = border; x + border < w; ++x) {
      const float r = response[size_t(y) * w + x];
      if (r < threshold) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (response[size_t(y + dy) * w + x + dx] > r) {
            is_max = false;
            break;
          }
        }
      if (is_max) candidates.push_back({r, x, y});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.resp > b.resp; });

  std::vector<Vec2> picked;
  auto too_close = [&](double x, double y) {
    const double d2 = params.min_spacing * params.min_spacing;
    for (const Vec2& p : existing)
      if ((p - Vec2(x, y)).squaredNorm() < d2) return true;
    for (const Vec2& p : picked)
      if ((p - Vec2(x, y)).squaredNorm() < d2) return true;
    return false;
  };
  for (const Candidate& cand : candidates) {
    if (int(picked.size()) >= params.max_features) break;
    if (too_close(cand.x, cand.y)) continue;
    picked.emplace_back(cand.x, cand.y);
  }
  return picked;
}

ImagePyramid ImagePyramid::build(const Image& img, int num_levels) {
  ImagePyramid pyr;
  pyr.levels.push_back(img);
  for (int l = 1; l < num_levels; ++l) {
    const Image& src = pyr.levels.back();
    const int w = src.width / 2;
    const int h = src.height / 2;
    if (w < 8 || h < 8) break;
    Image down(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const int sum = int(src.at(2 * x, 2 * y)) + src.at(2 * x + 1, 2 * y) +
                        src.at(2 * x, 2 * y + 1) + src.at(2 * x + 1, 2 * y + 1);
        down.at(x, y) = uint8_t((sum + 2) / 4);
      }
    pyr.levels.push_back(std::move(down));
  }
  return pyr;
}

namespace {

bool lk_level(const Image& prev, const Image& next, const Vec2& p, Vec2* flow,
              const TrackParams& params) {
  const int half = params.window / 2;
  if (p.x() < half + 1 || p.y() < half + 1 || p.x() > prev.width - half - 2 ||
      p.y() > prev.height - half - 2)
    return false;

  const int n = params.window * params.window;
  std::vector<double> tpl(n), gx(n), gy(n);
  double a = 0.0, b = 0.0, c = 0.0;
  int i = 0;
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx, ++i) {
      const double x = p.x() + dx;
      const double y = p.y() + dy;
      tpl[i] = prev.sample(x, y);
      gx[i] = 0.5 * (prev.sample(x + 1.0, y) - prev.sample(x - 1.0, y));
      gy[i] = 0.5 * (prev.sample(x, y + 1.0) - prev.sample(x, y - 1.0));
      a += gx[i] * gx[i];
      b += gx[i] * gy[i];
      c += gy[i] * gy[i];
    }
  }
  const double det = a * c - b * b;
  const double min_eig =
      0.5 * ((a + c) - std::sqrt((a - c) * (a - c) + 4.0 * b * b)) / n;
  if (min_eig < params.min_eig || det < 1e-12) return false;

  Vec2 d = *flow;
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    const double qx = p.x() + d.x();
    const double qy = p.y() + d.y();
    if (qx < half + 1 || qy < half + 1 || qx > next.width - half - 2 ||
        qy > next.height - half - 2)
      return false;
    double bx = 0.0, by = 0.0;
    i = 0;
    for (int dy = -half; dy <= half; ++dy) {
      for (int dx = -half; dx <= half; ++dx, ++i) {
        const double e = next.sample(qx + dx, qy + dy) - tpl[i];
        bx += e * gx[i];
        by += e * gy[i];
      }
    }
    const Vec2 step((c * -bx - -b * by) / det, (-(-b) * -bx + a * -by) / det);
    d += step;
    if (step.norm() < params.epsilon) break;
  }
  *flow = d;
  return true;
}

}  // namespace

void lk_track(const ImagePyramid& prev, const ImagePyramid& next,
              const std::vector<Vec2>& prev_pts, const std::vector<Vec2>* seeds,
              std::vector<Vec2>* next_pts, std::vector<uint8_t>* status,
              const TrackParams& params) {
  const int levels = int(std::min(prev.levels.size(), next.levels.size()));
  next_pts->resize(prev_pts.size());
  status->assign(prev_pts.size(), 0);
  for (size_t k = 0; k < prev_pts.size(); ++k) {
    const double top_scale = 1.0 / double(1 << (levels - 1));
    Vec2 flow = seeds ? Vec2(((*seeds)[k] - prev_pts[k]) * top_scale) : Vec2::Zero();
    bool ok = true;
    for (int l = levels - 1; l >= 0; --l) {
      const double scale = 1.0 / double(1 << l);
      if (!lk_level(prev.levels[l], next.levels[l], prev_pts[k] * scale, &flow,
                    params)) {
        ok = false;
        break;
      }
      if (l > 0) flow *= 2.0;
    }
    (*next_pts)[k] = prev_pts[k] + flow;
    (*status)[k] = ok ? 1 : 0;
  }
}

void track_features(const Image& prev, const Image& next,
                    const std::vector<Vec2>& prev_pts, std::vector<Vec2>* next_pts,
                    std::vector<uint8_t>* status, const TrackParams& params) {
  const ImagePyramid pp = ImagePyramid::build(prev, params.pyramid_levels);
  const ImagePyramid np = ImagePyramid::build(next, params.pyramid_levels);
  lk_track(pp, np, prev_pts, nullptr, next_pts, status, params);

  // Reverse gate: tracking back must land on the original point.
  std::vector<Vec2> back;
  std::vector<uint8_t> back_status;
  lk_track(np, pp, *next_pts, nullptr, &back, &back_status, params);
  for (size_t k = 0; k < prev_pts.size(); ++k) {
    if (!(*status)[k]) continue;
    if (!back_status[k] ||
        (back[k] - prev_pts[k]).norm() > params.reverse_threshold)
      (*status)[k] = 0;
  }
}

}  // namespace omni
