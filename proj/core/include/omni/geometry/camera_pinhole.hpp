#pragma once

#include <optional>

#include "omni/geometry/rotation.hpp"

namespace omni {

struct PinholeCamera {
  double fx = 0.0;
  double fy = 0.0;
  double u0 = 0.0;
  double v0 = 0.0;
  int width = 0;
  int height = 0;

  /// Nullopt for points at or behind the image plane.
  std::optional<Vec2> project(const Vec3& p) const;
  std::optional<Vec2> project(const Vec3& p, Eigen::Matrix<double, 2, 3>* jac) const;

  Vec3 unproject(const Vec2& uv) const;

  bool in_image(const Vec2& uv) const {
    return uv.x() >= 0.0 && uv.y() >= 0.0 && uv.x() <= width - 1 && uv.y() <= height - 1;
  }

  /// Camera with a given horizontal FoV; the principal point sits at the
  /// image center and fy = fx.
  static PinholeCamera with_hfov(double hfov_deg, int width, int height);
};

}  // namespace omni
