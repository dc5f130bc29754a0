#include "omni/geometry/camera_cylindrical.hpp"

#include <cmath>

namespace omni {

std::optional<Vec2> CylindricalCamera::project(const Vec3& p) const {
  return project(p, nullptr);
}

std::optional<Vec2> CylindricalCamera::project(const Vec3& p,
                                               Eigen::Matrix<double, 2, 3>* jac) const {
  const Vec3 q = rotation_from_source * p;
  const double rho2 = q.x() * q.x() + q.z() * q.z();
  if (rho2 < 1e-24) return std::nullopt;
  const double rho = std::sqrt(rho2);
  const double phi = std::atan2(q.x(), q.z());
  const Vec2 uv(f_phi * phi + u0, f_y * q.y() / rho + v0);

  if (jac) {
    Eigen::Matrix<double, 2, 3> dq;
    dq.row(0) = f_phi / rho2 * Vec3(q.z(), 0.0, -q.x()).transpose();
    dq.row(1) = f_y * Vec3(-q.x() * q.y() / (rho2 * rho), 1.0 / rho,
                           -q.z() * q.y() / (rho2 * rho))
                    .transpose();
    *jac = dq * rotation_from_source.toRotationMatrix();
  }
  return uv;
}

Vec3 CylindricalCamera::unproject(const Vec2& uv) const {
  const double phi = (uv.x() - u0) / f_phi;
  const double yr = (uv.y() - v0) / f_y;
  Vec3 dir(std::sin(phi), yr, std::cos(phi));
  dir.normalize();
  return rotation_from_source.conjugate() * dir;
}

CylindricalCamera CylindricalCamera::with_fov(double fov_deg, int width, int height) {
  CylindricalCamera cam;
  cam.width = width;
  cam.height = height;
  const double fov_rad = fov_deg * M_PI / 180.0;
  cam.f_phi = width / fov_rad;
  cam.f_y = cam.f_phi;
  cam.u0 = width / 2.0;
  cam.v0 = height / 2.0;
  return cam;
}

}  // namespace omni
