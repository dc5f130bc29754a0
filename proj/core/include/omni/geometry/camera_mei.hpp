#pragma once

#include <optional>

#include "omni/geometry/distortion.hpp"

namespace omni {

/// Unified (mirror-parameter) fisheye camera model with radial-tangential
/// distortion. Projection: normalize to the unit sphere, shift the projection
/// center by xi along z, perspective-divide, distort, apply intrinsics.
struct MeiCamera {
  double xi = 0.0;
  double fx = 0.0;
  double fy = 0.0;
  double u0 = 0.0;
  double v0 = 0.0;
  RadTanDistortion distortion;
  int width = 0;
  int height = 0;
  double fov_deg = 190.0;

  /// Returns nullopt when the sphere point falls outside the valid cone
  /// (z_s + xi <= 1e-9).
  std::optional<Vec2> project(const Vec3& p) const;

  /// Projection with the 2x3 Jacobian with respect to the 3D point.
  std::optional<Vec2> project(const Vec3& p, Eigen::Matrix<double, 2, 3>* jac) const;

  /// Unit ray through a pixel. Nullopt if the distortion inversion fails.
  std::optional<Vec3> unproject(const Vec2& uv) const;

  /// True when the pixel lies inside the image and inside the fov_deg circle.
  bool pixel_in_fov(const Vec2& uv) const;

  /// True when a unit direction is within the nominal FoV cone.
  bool direction_in_fov(const Vec3& dir) const;
};

}  // namespace omni
