#pragma once

#include "omni/synth/trajectory.hpp"
#include "omni/vio/imu.hpp"

namespace omni {

struct ImuSimOptions {
  double rate_hz = 500.0;
  uint32_t seed = 0;
  bool zero_noise = false;
  Vec3 initial_accel_bias = Vec3::Zero();
  Vec3 initial_gyro_bias = Vec3::Zero();
};

/// Samples the trajectory's specific force and body rate at rate_hz over
/// [0, duration], adding seeded white noise and bias random walks unless
/// zero_noise is set. accel = R_wb' * (a_world - g) + b_a + n_a with
/// g = (0, 0, -gravity).
std::vector<ImuSample> simulate_imu(const Trajectory& traj,
                                    const ImuNoiseParams& noise,
                                    const ImuSimOptions& options = {});

}  // namespace omni
