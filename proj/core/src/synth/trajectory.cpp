#include "omni/synth/trajectory.hpp"

#include <cmath>
#include <random>

namespace omni {

namespace {

// C2 time warp: rest for static_time, then a smoothstep speed ramp over
// ramp_time, then unit rate. Returns tau and its first two time derivatives.
void time_warp(double t, double ts, double tr, double* tau, double* dtau,
               double* ddtau) {
  if (t <= ts) {
    *tau = *dtau = *ddtau = 0.0;
    return;
  }
  if (tr <= 0.0 || t >= ts + tr) {
    const double ramp_area = tr > 0.0 ? 0.5 * tr : 0.0;
    *tau = ramp_area + (t - ts - tr);
    *dtau = 1.0;
    *ddtau = 0.0;
    return;
  }
  const double u = (t - ts) / tr;
  *dtau = 3.0 * u * u - 2.0 * u * u * u;
  *tau = tr * (u * u * u - 0.5 * u * u * u * u);
  *ddtau = 6.0 * u * (1.0 - u) / tr;
}

}  // namespace

Trajectory::Trajectory(const TrajectorySpec& spec) : spec_(spec) {
  if (spec_.kind == TrajectoryKind::RandomWaypoint) {
    std::mt19937 rng(spec_.seed);
    std::uniform_real_distribution<double> uf(0.5, 1.5);
    std::uniform_real_distribution<double> ua(0.4, 1.0);
    std::uniform_real_distribution<double> up(0.0, 2.0 * M_PI);
    const double base_rate = spec_.speed / std::max(spec_.radius, 1e-6);
    for (int axis = 0; axis < 3; ++axis) {
      const double axis_scale = axis == 2 ? 0.2 : 1.0;
      for (int j = 0; j < 3; ++j) {
        Harmonic h;
        h.freq = uf(rng) * base_rate * (j + 1) * 0.5;
        h.amp = ua(rng) * spec_.radius * axis_scale / (j + 1);
        h.phase = up(rng);
        harmonics_[axis].push_back(h);
      }
    }
  }
}

void Trajectory::curve(double tau, Vec3* c, Vec3* dc, Vec3* ddc) const {
  switch (spec_.kind) {
    case TrajectoryKind::Circle: {
      const double r = spec_.radius;
      const double w = spec_.speed / r;
      const double th = w * tau;
      *c = Vec3(r * std::cos(th), r * std::sin(th), spec_.height);
      *dc = Vec3(-r * w * std::sin(th), r * w * std::cos(th), 0.0);
      *ddc = Vec3(-r * w * w * std::cos(th), -r * w * w * std::sin(th), 0.0);
      break;
    }
    case TrajectoryKind::Infinity: {
      // Lemniscate of Gerono: x = A sin(th), y = (A/2) sin(2 th).
      const double a = spec_.radius;
      const double k = spec_.speed / a;
      const double th = k * tau;
      *c = Vec3(a * std::sin(th), 0.5 * a * std::sin(2.0 * th), spec_.height);
      *dc = Vec3(a * k * std::cos(th), a * k * std::cos(2.0 * th), 0.0);
      *ddc = Vec3(-a * k * k * std::sin(th), -2.0 * a * k * k * std::sin(2.0 * th), 0.0);
      break;
    }
    case TrajectoryKind::RandomWaypoint: {
      *c = Vec3(0.0, 0.0, spec_.height);
      *dc = Vec3::Zero();
      *ddc = Vec3::Zero();
      for (int axis = 0; axis < 3; ++axis) {
        for (const Harmonic& h : harmonics_[axis]) {
          const double ph = h.freq * tau + h.phase;
          // Subtract the tau=0 value so motion starts where the rest
          // interval left it.
          (*c)(axis) += h.amp * (std::sin(ph) - std::sin(h.phase));
          (*dc)(axis) += h.amp * h.freq * std::cos(ph);
          (*ddc)(axis) += -h.amp * h.freq * h.freq * std::sin(ph);
        }
      }
      break;
    }
  }
}

TrajectorySample Trajectory::sample(double t) const {
  double tau, dtau, ddtau;
  time_warp(t, spec_.static_time, spec_.ramp_time, &tau, &dtau, &ddtau);

  Vec3 c, dc, ddc;
  curve(tau, &c, &dc, &ddc);

  TrajectorySample s;
  s.t = t;
  s.p = c;
  s.v = dc * dtau;
  s.a = ddc * dtau * dtau + dc * ddtau;

  double yaw = spec_.fixed_yaw;
  double yaw_rate = 0.0;
  if (spec_.yaw_mode == YawMode::FollowVelocity) {
    // Heading follows the curve tangent, which stays defined through the
    // rest interval (where the velocity itself is zero).
    const double h2 = dc.x() * dc.x() + dc.y() * dc.y();
    if (h2 > 1e-12) {
      yaw = std::atan2(dc.y(), dc.x());
      yaw_rate = (dc.x() * ddc.y() - dc.y() * ddc.x()) / h2 * dtau;
    }
  }
  s.q = rot_z(yaw);
  s.omega = Vec3(0.0, 0.0, yaw_rate);
  return s;
}

SE3Pose Trajectory::pose(double t) const {
  const TrajectorySample s = sample(t);
  return SE3Pose{s.q, s.p};
}

}  // namespace omni
