#pragma once

#include "omni/io/trajectory_io.hpp"

namespace omni {

struct AteOptions {
  bool align_se3 = true;    // closed-form rigid alignment before the error
  double max_dt = 0.01;     // association gate, seconds
};

struct AteResult {
  double rmse = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double max_error = 0.0;
  double length = 0.0;        // reference trajectory path length, meters
  int matches = 0;
  SE3Pose alignment;          // reference_from_estimate applied before errors
};

/// Absolute trajectory error: nearest-timestamp association within max_dt,
/// optional closed-form least-squares SE(3) alignment (rotation from the SVD
/// of the cross-covariance, translation from the centroids), then position
/// error statistics. Throws InsufficientOverlap with fewer than 3 matches.
AteResult evaluate_ate(const TrajectoryData& estimate, const TrajectoryData& reference,
                       const AteOptions& options = {});

}  // namespace omni
