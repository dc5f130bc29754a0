#include "omni/depth/disparity.hpp"

#include <cmath>
#include <limits>

namespace omni {

int DisparityMap::valid_count() const {
  int n = 0;
  for (uint8_t v : valid) n += v;
  return n;
}

namespace {

constexpr float kInf = std::numeric_limits<float>::infinity();
// Per-pixel penalty for out-of-range comparisons; any window touching one
// exceeds kCostCeil and is rejected.
constexpr float kBad = 1e8f;
constexpr float kCostCeil = 1e7f;

// Box sum of `src` with an odd window; out-of-range outputs are +inf.
void box_sum(const std::vector<float>& src, int w, int h, int half,
             std::vector<float>& dst) {
  std::vector<float> rows(size_t(w) * h, kInf);
  for (int y = 0; y < h; ++y) {
    double run = 0.0;
    for (int x = 0; x < 2 * half && x < w; ++x) run += src[size_t(y) * w + x];
    for (int x = half; x + half < w; ++x) {
      run += src[size_t(y) * w + x + half];
      rows[size_t(y) * w + x] = float(run);
      run -= src[size_t(y) * w + x - half];
    }
  }
  for (int x = half; x + half < w; ++x) {
    double run = 0.0;
    for (int y = 0; y < 2 * half && y < h; ++y) run += rows[size_t(y) * w + x];
    for (int y = half; y + half < h; ++y) {
      run += rows[size_t(y + half) * w + x];
      dst[size_t(y) * w + x] = float(run);
      run -= rows[size_t(y - half) * w + x];
    }
  }
}

}  // namespace

DisparityMap block_match_disparity(const Image& left, const Image& right,
                                   const BlockMatchParams& params) {
  if (left.width != right.width || left.height != right.height)
    throw DimensionMismatch("block_match_disparity: image sizes differ");
  const int w = left.width;
  const int h = left.height;
  const int half = params.window / 2;
  const int dmin = params.min_disparity;
  const int dmax = params.max_disparity;
  const int nd = dmax - dmin + 1;
  const size_t npix = size_t(w) * h;

  DisparityMap out(w, h);
  if (w < params.window || h < params.window) return out;

  // Cost volume: SAD per disparity.
  std::vector<std::vector<float>> cost(nd, std::vector<float>(npix, kInf));
  std::vector<float> diff(npix);
  for (int di = 0; di < nd; ++di) {
    const int d = dmin + di;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        diff[size_t(y) * w + x] =
            x - d >= 0 ? float(std::abs(int(left.at(x, y)) - int(right.at(x - d, y))))
                       : kBad;
      }
    }
    box_sum(diff, w, h, half, cost[di]);
  }

  // Texture mask from the left-window intensity variance.
  std::vector<float> inten(npix), inten2(npix);
  for (size_t i = 0; i < npix; ++i) {
    inten[i] = float(left.data[i]);
    inten2[i] = inten[i] * inten[i];
  }
  std::vector<float> sum_i(npix, kInf), sum_i2(npix, kInf);
  box_sum(inten, w, h, half, sum_i);
  box_sum(inten2, w, h, half, sum_i2);
  const double area = double(params.window) * params.window;

  // Winner per left pixel, with right-based winner for the consistency check.
  std::vector<int> best_left(npix, -1);
  std::vector<int> best_right(npix, -1);
  std::vector<float> best_cost_r(npix, kInf);
  for (int y = half; y + half < h; ++y) {
    for (int x = half; x + half < w; ++x) {
      const size_t i = size_t(y) * w + x;
      float bc = kInf;
      int bd = -1;
      for (int di = 0; di < nd; ++di) {
        const float c = cost[di][i];
        if (c < bc) {
          bc = c;
          bd = di;
        }
        // Right-image winner: cost at right pixel x-d matches left pixel x.
        const int xr = x - (dmin + di);
        if (xr >= 0 && c < kCostCeil) {
          const size_t ir = size_t(y) * w + xr;
          if (c < best_cost_r[ir]) {
            best_cost_r[ir] = c;
            best_right[ir] = di;
          }
        }
      }
      if (bd >= 0 && bc < kCostCeil) best_left[i] = bd;
    }
  }

  for (int y = half; y + half < h; ++y) {
    for (int x = half; x + half < w; ++x) {
      const size_t i = size_t(y) * w + x;
      const int di = best_left[i];
      if (di < 0) continue;
      const int d = dmin + di;

      const double mean = sum_i[i] / area;
      const double var = sum_i2[i] / area - mean * mean;
      if (var < params.texture_variance) continue;

      const int xr = x - d;
      if (xr < 0 || best_right[size_t(y) * w + xr] < 0) continue;
      const int d_r = dmin + best_right[size_t(y) * w + xr];
      if (std::abs(d - d_r) > params.lr_threshold) continue;

      double dsub = d;
      if (di > 0 && di + 1 < nd) {
        const double cm = cost[di - 1][i];
        const double c0 = cost[di][i];
        const double cp = cost[di + 1][i];
        const double denom = cm - 2.0 * c0 + cp;
        if (cm < kCostCeil && cp < kCostCeil && denom > 1e-9)
          dsub += 0.5 * (cm - cp) / denom;
      }
      if (dsub < params.min_disparity) continue;
      out.disparity[i] = float(dsub);
      out.valid[i] = 1;
    }
  }
  return out;
}

DisparityMap BlockMatchBackend::compute(const Image& left, const Image& right) const {
  return block_match_disparity(left, right, params_);
}

}  // namespace omni
