#pragma once

#include <vector>

#include "omni/geometry/rotation.hpp"

namespace omni {

struct CloudPoint {
  Vec3 position = Vec3::Zero();
  float intensity = 0.0f;
};

struct PointCloud {
  std::vector<CloudPoint> points;

  size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  void append(const PointCloud& other) {
    points.insert(points.end(), other.points.begin(), other.points.end());
  }
};

/// Centroid-per-voxel down-sampling. Output order follows the first
/// appearance of each voxel in the input, so the result is deterministic for
/// a fixed input order.
PointCloud voxel_downsample(const PointCloud& cloud, double leaf);

/// Concatenates the per-pair clouds (already in body frame) and voxel
/// down-samples the union.
PointCloud fuse_pairs(const std::vector<PointCloud>& clouds, double leaf = 0.05);

}  // namespace omni
