#include "omni/io/ate.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace omni {

AteResult evaluate_ate(const TrajectoryData& estimate, const TrajectoryData& reference,
                       const AteOptions& options) {
  // Nearest-timestamp association within the gate.
  std::vector<std::pair<Vec3, Vec3>> matched;  // (estimate, reference)
  for (const TrajectoryPoint& e : estimate) {
    auto it = std::lower_bound(
        reference.begin(), reference.end(), e.t,
        [](const TrajectoryPoint& r, double t) { return r.t < t; });
    const TrajectoryPoint* best = nullptr;
    if (it != reference.end()) best = &*it;
    if (it != reference.begin()) {
      const TrajectoryPoint* prev = &*(it - 1);
      if (!best || std::abs(prev->t - e.t) < std::abs(best->t - e.t)) best = prev;
    }
    if (best && std::abs(best->t - e.t) <= options.max_dt)
      matched.emplace_back(e.p, best->p);
  }
  if (matched.size() < 3)
    throw InsufficientOverlap("only " + std::to_string(matched.size()) +
                              " associated poses (need >= 3)");

  AteResult out;
  out.matches = int(matched.size());

  if (options.align_se3) {
    Vec3 mean_e = Vec3::Zero(), mean_r = Vec3::Zero();
    for (const auto& [pe, pr] : matched) {
      mean_e += pe;
      mean_r += pr;
    }
    mean_e /= double(matched.size());
    mean_r /= double(matched.size());

    Mat3 W = Mat3::Zero();
    for (const auto& [pe, pr] : matched)
      W += (pr - mean_r) * (pe - mean_e).transpose();
    Eigen::JacobiSVD<Mat3> svd(W, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 R = svd.matrixU() * svd.matrixV().transpose();
    if (R.determinant() < 0.0) {
      Mat3 fix = Mat3::Identity();
      fix(2, 2) = -1.0;
      R = svd.matrixU() * fix * svd.matrixV().transpose();
    }
    out.alignment.rotation = Quat(R).normalized();
    out.alignment.translation = mean_r - R * mean_e;
  }

  std::vector<double> errors;
  errors.reserve(matched.size());
  double sq_sum = 0.0, sum = 0.0;
  for (const auto& [pe, pr] : matched) {
    const double err = (out.alignment.act(pe) - pr).norm();
    errors.push_back(err);
    sq_sum += err * err;
    sum += err;
    out.max_error = std::max(out.max_error, err);
  }
  out.rmse = std::sqrt(sq_sum / double(errors.size()));
  out.mean = sum / double(errors.size());
  std::sort(errors.begin(), errors.end());
  const size_t m = errors.size() / 2;
  out.median = errors.size() % 2 ? errors[m] : 0.5 * (errors[m - 1] + errors[m]);

  for (size_t i = 1; i < reference.size(); ++i)
    out.length += (reference[i].p - reference[i - 1].p).norm();
  return out;
}

}  // namespace omni
