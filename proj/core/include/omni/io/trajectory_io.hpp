#pragma once

#include <string>
#include <vector>

#include "omni/geometry/rotation.hpp"
#include "omni/io/errors.hpp"

namespace omni {

struct TrajectoryPoint {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
  Quat q = Quat::Identity();
};

using TrajectoryData = std::vector<TrajectoryPoint>;

/// TUM text format: `timestamp tx ty tz qx qy qz qw`, one row per pose,
/// 9 significant digits. Throws IoError on write failure.
void write_tum(const std::string& path, const TrajectoryData& traj);

/// Throws IoError (unreadable), ParseError (malformed row) or DataError
/// (non-increasing timestamps).
TrajectoryData read_tum(const std::string& path);

}  // namespace omni
