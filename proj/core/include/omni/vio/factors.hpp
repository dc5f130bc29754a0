#pragma once

#include "omni/geometry/camera_cylindrical.hpp"
#include "omni/vio/sliding_window.hpp"

namespace omni {

struct TimestampMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Whitened 15-dim IMU residual between consecutive keyframes with analytic
/// Jacobians with respect to both states. Local state order per keyframe:
/// [dp, dtheta, dv, dba, dbg]; attitude perturbation is q * exp(dtheta).
struct ImuResidual {
  Eigen::Matrix<double, 15, 1> residual;
  Eigen::Matrix<double, 15, 15> jac_k;    // w.r.t. the earlier keyframe
  Eigen::Matrix<double, 15, 15> jac_k1;   // w.r.t. the later keyframe
};

ImuResidual imu_residual(const PreintegratedImu& pre, const KeyframeState& state_k,
                         const KeyframeState& state_k1, const Vec3& gravity,
                         bool check_timestamps = true);

/// 2-dim cylindrical reprojection residual (pixels, whitened) of an
/// inverse-depth feature transported from its anchor to an observer frame.
struct ReprojectionResidual {
  Vec2 residual;
  Eigen::Matrix<double, 2, 6> jac_anchor;    // [dp, dtheta] of the anchor keyframe
  Eigen::Matrix<double, 2, 6> jac_observer;  // [dp, dtheta] of the observer keyframe
  Vec2 jac_lambda;
};

struct ReprojectionParams {
  double pixel_sigma = 1.5;
  double huber_delta = 1.0;  // in whitened units, applied at cost level
};

/// Nullopt = ProjectionFailure (point behind the observer / outside the
/// tracking image).
std::optional<ReprojectionResidual> reprojection_residual(
    const Vec3& anchor_bearing, double lambda, const Vec2& observed_pixel,
    const KeyframeState& anchor_kf, const KeyframeState& observer_kf,
    const SE3Pose& anchor_cam, const SE3Pose& observer_cam,
    const CylindricalCamera& observer_model, const ReprojectionParams& params = {});

/// Left/right quaternion product matrices for [w, x, y, z] coefficients.
Eigen::Matrix4d quat_left(const Quat& q);
Eigen::Matrix4d quat_right(const Quat& q);

}  // namespace omni
