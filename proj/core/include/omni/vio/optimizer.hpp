#pragma once

#include "omni/vio/factors.hpp"

namespace omni {

struct SolverDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OptimizeOptions {
  int max_iterations = 25;
  double step_tol = 1e-8;
  double cost_rel_tol = 1e-9;
  double init_damping = 1e-4;
  double max_damping = 1e10;
  ReprojectionParams reproj;
  ImuNoiseParams noise;
};

struct OptimizeReport {
  int iterations = 0;
  int accepted_steps = 0;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  double final_step_norm = 0.0;
  bool converged = false;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) over the window's keyframe
/// states and feature inverse depths. Rotations update on the manifold via
/// right-multiplied tangent increments; Huber applies to the visual terms.
/// The gauge comes from the marginalization prior, or from freezing the first
/// pose when no prior exists. Throws SolverDiverged when the cost cannot be
/// decreased at maximum damping.
OptimizeReport optimize_window(SlidingWindow& window,
                               const std::vector<CylindricalCamera>& cam_models,
                               const OptimizeOptions& options = {});

/// Total robust cost of the window at its current estimates (prior + IMU +
/// visual terms), using the same weighting as optimize_window.
double window_cost(const SlidingWindow& window,
                   const std::vector<CylindricalCamera>& cam_models,
                   const OptimizeOptions& options = {});

}  // namespace omni
