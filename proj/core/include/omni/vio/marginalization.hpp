#pragma once

#include "omni/vio/optimizer.hpp"

namespace omni {

/// Schur-complements the oldest keyframe (and the inverse depths of features
/// anchored there) into the window's prior, then drops that keyframe.
/// Surviving features anchored at the removed keyframe are re-anchored to
/// their next observation with the depth transported; features left with
/// fewer than two observations are dropped.
void marginalize_oldest(SlidingWindow& window,
                        const std::vector<CylindricalCamera>& cam_models,
                        const OptimizeOptions& options = {});

/// Builds a square-root prior (J, r0) from an information system (H, b),
/// clamping negative eigenvalues to zero: cost = 0.5 * || r0 + J dx ||^2
/// reproduces 0.5 dx' H dx + b' dx up to a constant.
void info_to_sqrt(const Eigen::MatrixXd& H, const Eigen::VectorXd& b,
                  Eigen::MatrixXd* J, Eigen::VectorXd* r0);

}  // namespace omni
