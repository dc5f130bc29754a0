#include "omni/geometry/camera_mei.hpp"

#include <cmath>

namespace omni {

namespace {
constexpr double kConeEps = 1e-9;
}

std::optional<Vec2> MeiCamera::project(const Vec3& p) const {
  return project(p, nullptr);
}

std::optional<Vec2> MeiCamera::project(const Vec3& p,
                                       Eigen::Matrix<double, 2, 3>* jac) const {
  const double n = p.norm();
  if (n < 1e-15) return std::nullopt;
  const Vec3 s = p / n;
  const double denom = s.z() + xi;
  if (denom <= kConeEps) return std::nullopt;

  const Vec2 m(s.x() / denom, s.y() / denom);
  const Vec2 md = distortion.apply(m);
  const Vec2 uv(fx * md.x() + u0, fy * md.y() + v0);

  if (jac) {
    const Mat3 ds_dp = (Mat3::Identity() - s * s.transpose()) / n;
    Eigen::Matrix<double, 2, 3> dm_ds;
    dm_ds << 1.0 / denom, 0.0, -s.x() / (denom * denom),
        0.0, 1.0 / denom, -s.y() / (denom * denom);
    const Eigen::Matrix2d dd = distortion.apply_jacobian(m);
    Eigen::Matrix2d k;
    k << fx, 0.0, 0.0, fy;
    *jac = k * dd * dm_ds * ds_dp;
  }
  return uv;
}

std::optional<Vec3> MeiCamera::unproject(const Vec2& uv) const {
  const Vec2 md((uv.x() - u0) / fx, (uv.y() - v0) / fy);
  const auto m = distortion.invert(md);
  if (!m) return std::nullopt;
  const double r2 = m->squaredNorm();
  const double disc = 1.0 + r2 * (1.0 - xi * xi);
  if (disc < 0.0) return std::nullopt;
  const double t = (xi + std::sqrt(disc)) / (1.0 + r2);
  Vec3 dir(m->x() * t, m->y() * t, t - xi);
  const double dn = dir.norm();
  if (dn < 1e-15) return std::nullopt;
  return dir / dn;
}

bool MeiCamera::pixel_in_fov(const Vec2& uv) const {
  if (uv.x() < 0.0 || uv.y() < 0.0 || uv.x() > width - 1 || uv.y() > height - 1)
    return false;
  const auto dir = unproject(uv);
  return dir && direction_in_fov(*dir);
}

bool MeiCamera::direction_in_fov(const Vec3& dir) const {
  const double half = 0.5 * fov_deg * M_PI / 180.0;
  const double angle = std::atan2(std::hypot(dir.x(), dir.y()), dir.z());
  return angle <= half;
}

}  // namespace omni
