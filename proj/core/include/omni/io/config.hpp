#pragma once

#include <string>

#include "omni/depth/disparity.hpp"
#include "omni/io/errors.hpp"
#include "omni/stereo/rig.hpp"
#include "omni/stereo/virtual_stereo.hpp"
#include "omni/vio/imu.hpp"

namespace omni {

struct VioConfig {
  int window = 10;
  int max_features = 150;
  double parallax_px = 10.0;
  int min_tracked = 60;
  double keyframe_dt = 0.5;        // time-based keyframe fallback, seconds
  double pixel_sigma = 1.5;
  double huber_delta = 1.0;
  double static_init_time = 0.8;   // declared static interval, seconds
  double tracking_fov_deg = 190.0; // cylindrical tracking image
  int tracking_width = 400;
  int tracking_height = 160;
};

struct DepthConfig {
  int min_disparity = 0;
  int max_disparity = 64;
  double voxel_leaf = 0.05;
  double z_min = 0.3;
  double z_max = 20.0;
};

struct RigConfig {
  FisheyeRig rig;
  std::array<std::string, 4> camera_ids{"cam_a", "cam_b", "cam_c", "cam_d"};
  double imu_rate_hz = 500.0;
  ImuNoiseParams imu_noise;
  VirtualStereoParams virtual_cam;
  VioConfig vio;
  DepthConfig depth;
};

/// Parses and fully validates a YAML rig configuration. Optional sections
/// (imu noise, virtual, vio, depth) take their defaults when omitted; errors
/// name the offending key. Extrinsic quaternions off unit norm by more than
/// 1e-6 are rejected; smaller deviations are silently normalized.
RigConfig load_config(const std::string& path);

/// Emits every field so that save(load(x)) round-trips to an identical
/// configuration.
void save_config(const std::string& path, const RigConfig& config);

/// Bundled reference fixture: ideal square rig (cameras 0.18 m from the body
/// center at yaws 0/90/180/270, adjacent baseline 0.18 * sqrt(2)).
RigConfig reference_config();

bool operator==(const RigConfig& a, const RigConfig& b);

}  // namespace omni
