#include "omni/geometry/rotation.hpp"

#include <cmath>

namespace omni {

Mat3 skew(const Vec3& a) {
  Mat3 m;
  m << 0.0, -a.z(), a.y(), a.z(), 0.0, -a.x(), -a.y(), a.x(), 0.0;
  return m;
}

Quat exp_so3(const Vec3& phi) {
  const double theta = phi.norm();
  if (theta < 1e-12) {
    Quat q(1.0, 0.5 * phi.x(), 0.5 * phi.y(), 0.5 * phi.z());
    q.normalize();
    return q;
  }
  const Vec3 axis = phi / theta;
  const double half = 0.5 * theta;
  const double s = std::sin(half);
  return Quat(std::cos(half), s * axis.x(), s * axis.y(), s * axis.z());
}

Vec3 log_so3(const Quat& q_in) {
  Quat q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  const Vec3 v(q.x(), q.y(), q.z());
  const double n = v.norm();
  if (n < 1e-12) return 2.0 * v;
  const double theta = 2.0 * std::atan2(n, q.w());
  return theta * v / n;
}

Quat rot_y(double angle) { return exp_so3(Vec3(0.0, angle, 0.0)); }

Quat rot_z(double angle) { return exp_so3(Vec3(0.0, 0.0, angle)); }

double rotation_angle(const Quat& a, const Quat& b) {
  return log_so3(a.conjugate() * b).norm();
}

}  // namespace omni
