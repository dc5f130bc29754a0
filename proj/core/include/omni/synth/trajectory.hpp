#pragma once

#include <cstdint>
#include <vector>

#include "omni/geometry/rotation.hpp"

namespace omni {

enum class TrajectoryKind { Circle, Infinity, RandomWaypoint };
enum class YawMode { FollowVelocity, Fixed };

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::Circle;
  double radius = 2.0;      // circle radius / figure-eight scale / excursion
  double speed = 1.0;       // m/s, nominal cruise speed
  double height = 1.0;      // m above the floor
  YawMode yaw_mode = YawMode::FollowVelocity;
  double fixed_yaw = 0.0;   // radians, used when yaw_mode == Fixed
  double duration = 10.0;   // seconds
  double static_time = 1.0; // initial rest interval (for VIO initialization)
  double ramp_time = 1.0;   // C2 speed ramp from rest to cruise
  uint32_t seed = 0;        // RandomWaypoint only
};

struct TrajectorySample {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();
  Quat q = Quat::Identity();       // world-from-body
  Vec3 omega = Vec3::Zero();       // body-frame angular rate
};

/// Analytic ground-truth trajectory. Motion starts at rest, accelerates
/// through a C2 time warp, then follows the base curve at cruise speed, so
/// position, velocity and acceleration are all continuous (and consistent
/// with an IMU).
class Trajectory {
 public:
  explicit Trajectory(const TrajectorySpec& spec);

  TrajectorySample sample(double t) const;
  SE3Pose pose(double t) const;
  double duration() const { return spec_.duration; }
  const TrajectorySpec& spec() const { return spec_; }

 private:
  // Base curve c(tau) and its first three parameter derivatives.
  void curve(double tau, Vec3* c, Vec3* dc, Vec3* ddc) const;

  TrajectorySpec spec_;
  // RandomWaypoint: seeded sum of sinusoids per axis.
  struct Harmonic {
    double amp, freq, phase;
  };
  std::vector<Harmonic> harmonics_[3];
};

}  // namespace omni
