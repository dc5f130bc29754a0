#include "omni/geometry/distortion.hpp"

namespace omni {

Vec2 RadTanDistortion::apply(const Vec2& m) const {
  const double x = m.x();
  const double y = m.y();
  const double r2 = x * x + y * y;
  const double radial = 1.0 + r2 * (k1 + k2 * r2);
  const double xd = x * radial + 2.0 * p1 * x * y + p2 * (r2 + 2.0 * x * x);
  const double yd = y * radial + p1 * (r2 + 2.0 * y * y) + 2.0 * p2 * x * y;
  return {xd, yd};
}

Eigen::Matrix2d RadTanDistortion::apply_jacobian(const Vec2& m) const {
  const double x = m.x();
  const double y = m.y();
  const double r2 = x * x + y * y;
  const double radial = 1.0 + r2 * (k1 + k2 * r2);
  const double dradial_dr2 = k1 + 2.0 * k2 * r2;
  Eigen::Matrix2d j;
  j(0, 0) = radial + x * dradial_dr2 * 2.0 * x + 2.0 * p1 * y + 6.0 * p2 * x;
  j(0, 1) = x * dradial_dr2 * 2.0 * y + 2.0 * p1 * x + 2.0 * p2 * y;
  j(1, 0) = y * dradial_dr2 * 2.0 * x + 2.0 * p1 * x + 2.0 * p2 * y;
  j(1, 1) = radial + y * dradial_dr2 * 2.0 * y + 6.0 * p1 * y + 2.0 * p2 * x;
  return j;
}

std::optional<Vec2> RadTanDistortion::invert(const Vec2& md) const {
  if (is_zero()) return md;
  Vec2 m = md;
  for (int i = 0; i < 20; ++i) {
    const Vec2 err = apply(m) - md;
    if (err.squaredNorm() < 1e-24) return m;
    m -= err;
  }
  const Vec2 err = apply(m) - md;
  if (err.squaredNorm() < 1e-24) return m;
  return std::nullopt;
}

}  // namespace omni
