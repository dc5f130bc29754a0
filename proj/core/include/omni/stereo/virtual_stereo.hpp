#pragma once

#include <array>

#include "omni/geometry/camera_pinhole.hpp"
#include "omni/stereo/rig.hpp"

namespace omni {

enum class VirtualSide { Left, Right };

/// One of the eight virtual pinhole cameras derived from the rig: the source
/// fisheye rotated by R_y(-pi/4) (left) or R_y(+pi/4) (right) about its own
/// center.
struct VirtualCamSpec {
  int source_index = 0;
  VirtualSide side = VirtualSide::Left;
  Quat rotation_offset = Quat::Identity();
  PinholeCamera model;
  SE3Pose pose;  // body-from-virtual-camera
};

/// Two facing virtual cameras from adjacent fisheyes, rectified onto a shared
/// rotation whose x axis is the baseline.
struct StereoPair {
  VirtualCamSpec left;
  VirtualCamSpec right;
  double baseline = 0.0;
  Quat rectified_rotation = Quat::Identity();  // body-from-rectified
  PinholeCamera rectified_model;
  bool degraded = false;  // rig geometry deviates > 15 deg from square

  Vec3 left_center() const { return left.pose.translation; }
  Vec3 right_center() const { return right.pose.translation; }
};

struct VirtualStereoParams {
  double fov_deg = 100.0;
  int width = 320;
  int height = 240;
};

/// Left/right virtual cameras for each fisheye (8 specs, order A_l, A_r,
/// B_l, B_r, ...). Virtual centers coincide with the fisheye centers.
std::array<VirtualCamSpec, 8> build_virtual_extrinsics(
    const FisheyeRig& rig, const VirtualStereoParams& params = {});

/// Pairs (A-right, B-left), (B-right, C-left), (C-right, D-left),
/// (D-right, A-left). The pair's left image comes from the first member.
std::array<StereoPair, 4> make_stereo_pairs(const std::array<VirtualCamSpec, 8>& specs);

}  // namespace omni
