#include "omni/synth/imu_sim.hpp"

#include <cmath>
#include <random>

namespace omni {

std::vector<ImuSample> simulate_imu(const Trajectory& traj,
                                    const ImuNoiseParams& noise,
                                    const ImuSimOptions& options) {
  const double dt = 1.0 / options.rate_hz;
  const int n = int(std::floor(traj.duration() * options.rate_hz)) + 1;
  const Vec3 g_world(0.0, 0.0, -noise.gravity);

  std::mt19937 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sqrt_rate = std::sqrt(options.rate_hz);
  const double sqrt_dt = std::sqrt(dt);

  Vec3 ba = options.initial_accel_bias;
  Vec3 bg = options.initial_gyro_bias;

  std::vector<ImuSample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = i * dt;
    const TrajectorySample s = traj.sample(t);

    ImuSample m;
    m.timestamp = t;
    m.accel = s.q.conjugate() * (s.a - g_world);
    m.gyro = s.omega;
    if (!options.zero_noise) {
      m.accel += ba;
      m.gyro += bg;
      for (int k = 0; k < 3; ++k) {
        m.accel(k) += noise.accel_noise_density * sqrt_rate * gauss(rng);
        m.gyro(k) += noise.gyro_noise_density * sqrt_rate * gauss(rng);
      }
      for (int k = 0; k < 3; ++k) {
        ba(k) += noise.accel_bias_walk * sqrt_dt * gauss(rng);
        bg(k) += noise.gyro_bias_walk * sqrt_dt * gauss(rng);
      }
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace omni
