#pragma once

#include <stdexcept>
#include <vector>

#include "omni/geometry/rotation.hpp"

namespace omni {

struct ImuSample {
  double timestamp = 0.0;  // seconds
  Vec3 gyro = Vec3::Zero();   // rad/s
  Vec3 accel = Vec3::Zero();  // m/s^2, specific force
};

struct ImuNoiseParams {
  double accel_noise_density = 0.01;   // m/s^2 / sqrt(Hz)
  double gyro_noise_density = 0.001;   // rad/s / sqrt(Hz)
  double accel_bias_walk = 0.0002;     // m/s^3 / sqrt(Hz)
  double gyro_bias_walk = 2e-5;        // rad/s^2 / sqrt(Hz)
  double gravity = 9.81;               // m/s^2
};

struct EmptyInterval : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonMonotoneTime : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace omni
