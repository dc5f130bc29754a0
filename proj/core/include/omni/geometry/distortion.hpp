#pragma once

#include <optional>

#include "omni/geometry/rotation.hpp"

namespace omni {

/// Radial-tangential lens distortion on normalized image coordinates.
struct RadTanDistortion {
  double k1 = 0.0;
  double k2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  bool is_zero() const { return k1 == 0.0 && k2 == 0.0 && p1 == 0.0 && p2 == 0.0; }

  Vec2 apply(const Vec2& m) const;

  /// Jacobian of apply with respect to the undistorted point.
  Eigen::Matrix2d apply_jacobian(const Vec2& m) const;

  /// Inverts apply by damped fixed-point iteration.
  /// Returns nullopt if the iteration does not reach 1e-12 within 20 steps.
  std::optional<Vec2> invert(const Vec2& md) const;
};

}  // namespace omni
