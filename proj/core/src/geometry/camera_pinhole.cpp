#include "omni/geometry/camera_pinhole.hpp"

#include <cmath>

namespace omni {

std::optional<Vec2> PinholeCamera::project(const Vec3& p) const {
  return project(p, nullptr);
}

std::optional<Vec2> PinholeCamera::project(const Vec3& p,
                                           Eigen::Matrix<double, 2, 3>* jac) const {
  if (p.z() <= 1e-9) return std::nullopt;
  const double iz = 1.0 / p.z();
  const Vec2 uv(fx * p.x() * iz + u0, fy * p.y() * iz + v0);
  if (jac) {
    *jac << fx * iz, 0.0, -fx * p.x() * iz * iz,
        0.0, fy * iz, -fy * p.y() * iz * iz;
  }
  return uv;
}

Vec3 PinholeCamera::unproject(const Vec2& uv) const {
  Vec3 dir((uv.x() - u0) / fx, (uv.y() - v0) / fy, 1.0);
  dir.normalize();
  return dir;
}

PinholeCamera PinholeCamera::with_hfov(double hfov_deg, int width, int height) {
  PinholeCamera cam;
  cam.width = width;
  cam.height = height;
  cam.fx = (width / 2.0) / std::tan(0.5 * hfov_deg * M_PI / 180.0);
  cam.fy = cam.fx;
  cam.u0 = width / 2.0;
  cam.v0 = height / 2.0;
  return cam;
}

}  // namespace omni
