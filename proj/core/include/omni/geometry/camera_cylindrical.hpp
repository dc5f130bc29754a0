#pragma once

#include <optional>

#include "omni/geometry/rotation.hpp"

namespace omni {

/// Cylindrical virtual camera: the horizontal pixel coordinate is the azimuth
/// angle phi = atan2(X, Z) scaled by f_phi, the vertical one is Y / rho scaled
/// by f_y, with rho = sqrt(X^2 + Z^2). Points are first rotated into the
/// virtual frame by rotation_from_source.
struct CylindricalCamera {
  double f_phi = 0.0;
  double f_y = 0.0;
  double u0 = 0.0;
  double v0 = 0.0;
  int width = 0;
  int height = 0;
  Quat rotation_from_source = Quat::Identity();

  /// Nullopt when the rotated point lies on the cylinder axis (X = Z = 0).
  std::optional<Vec2> project(const Vec3& p) const;

  /// Projection with the 2x3 Jacobian with respect to the source-frame point.
  std::optional<Vec2> project(const Vec3& p, Eigen::Matrix<double, 2, 3>* jac) const;

  /// Unit ray through a pixel, expressed in the source camera frame.
  Vec3 unproject(const Vec2& uv) const;

  bool in_image(const Vec2& uv) const {
    return uv.x() >= 0.0 && uv.y() >= 0.0 && uv.x() <= width - 1 && uv.y() <= height - 1;
  }

  /// Camera spanning fov_deg horizontally across `width` pixels (f_phi chosen
  /// in pixels per radian so the FoV fills the image), f_y = f_phi.
  static CylindricalCamera with_fov(double fov_deg, int width, int height);
};

}  // namespace omni
