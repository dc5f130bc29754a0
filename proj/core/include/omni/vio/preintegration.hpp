#pragma once

#include "omni/vio/imu.hpp"

namespace omni {

/// IMU deltas between two keyframes, integrated with the midpoint rule at a
/// fixed linearization bias. Carries first-order bias Jacobians and the
/// propagated 15x15 covariance (state order: position, attitude, velocity,
/// accel bias, gyro bias).
struct PreintegratedImu {
  double dt_total = 0.0;
  Vec3 delta_p = Vec3::Zero();
  Vec3 delta_v = Vec3::Zero();
  Quat delta_q = Quat::Identity();
  Vec3 lin_ba = Vec3::Zero();
  Vec3 lin_bg = Vec3::Zero();
  Eigen::Matrix<double, 15, 15> jacobian = Eigen::Matrix<double, 15, 15>::Identity();
  Eigen::Matrix<double, 15, 15> covariance = Eigen::Matrix<double, 15, 15>::Zero();
  std::vector<ImuSample> samples;  // kept for re-preintegration at a new bias

  Eigen::Matrix3d dp_dba() const { return jacobian.block<3, 3>(0, 9); }
  Eigen::Matrix3d dp_dbg() const { return jacobian.block<3, 3>(0, 12); }
  Eigen::Matrix3d dq_dbg() const { return jacobian.block<3, 3>(3, 12); }
  Eigen::Matrix3d dv_dba() const { return jacobian.block<3, 3>(6, 9); }
  Eigen::Matrix3d dv_dbg() const { return jacobian.block<3, 3>(6, 12); }

  /// Deltas corrected to a nearby bias via the stored Jacobians.
  void corrected(const Vec3& ba, const Vec3& bg, Vec3* p, Quat* q, Vec3* v) const;
};

/// Midpoint-rule preintegration over the sample interval. Requires at least
/// two samples with strictly increasing timestamps.
PreintegratedImu preintegrate(const std::vector<ImuSample>& samples, const Vec3& ba,
                              const Vec3& bg, const ImuNoiseParams& noise);

}  // namespace omni
