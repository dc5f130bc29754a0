#pragma once

#include "omni/depth/disparity.hpp"
#include "omni/depth/point_cloud.hpp"
#include "omni/geometry/camera_pinhole.hpp"
#include "omni/stereo/virtual_stereo.hpp"

namespace omni {

struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<float> depth;  // meters along +z
  std::vector<uint8_t> valid;

  DepthMap() = default;
  DepthMap(int w, int h)
      : width(w), height(h), depth(size_t(w) * h, 0.0f), valid(size_t(w) * h, 0) {}

  size_t index(int x, int y) const { return size_t(y) * width + x; }
  int valid_count() const;
};

struct DepthRange {
  double z_min = 0.3;
  double z_max = 20.0;
};

/// z = fx * baseline / disparity; pixels outside (z_min, z_max) or with
/// non-positive disparity are invalidated.
DepthMap disparity_to_depth(const DisparityMap& d, const StereoPair& pair,
                            const DepthRange& range = {});

/// Back-projects valid pixels through the rectified camera and transforms
/// them by cam_pose (body-from-camera). Intensity is taken from `intensity`
/// when provided (same size as the depth map).
PointCloud depth_to_points(const DepthMap& z, const PinholeCamera& cam,
                           const SE3Pose& cam_pose, const Image* intensity = nullptr);

}  // namespace omni
