#include "omni/stereo/virtual_stereo.hpp"

#include <cmath>

namespace omni {

std::array<VirtualCamSpec, 8> build_virtual_extrinsics(const FisheyeRig& rig,
                                                       const VirtualStereoParams& params) {
  std::array<VirtualCamSpec, 8> specs;
  const PinholeCamera model =
      PinholeCamera::with_hfov(params.fov_deg, params.width, params.height);
  for (int i = 0; i < 4; ++i) {
    for (int s = 0; s < 2; ++s) {
      VirtualCamSpec& spec = specs[2 * i + s];
      spec.source_index = i;
      spec.side = s == 0 ? VirtualSide::Left : VirtualSide::Right;
      spec.rotation_offset = rot_y(s == 0 ? -M_PI / 4.0 : M_PI / 4.0);
      spec.model = model;
      spec.pose.rotation = rig.cameras[i].body_from_camera.rotation * spec.rotation_offset;
      spec.pose.translation = rig.cameras[i].body_from_camera.translation;
    }
  }
  return specs;
}

std::array<StereoPair, 4> make_stereo_pairs(const std::array<VirtualCamSpec, 8>& specs) {
  std::array<StereoPair, 4> pairs;
  const double max_skew_rad = 15.0 * M_PI / 180.0;
  for (int i = 0; i < 4; ++i) {
    StereoPair& pair = pairs[i];
    const int j = (i + 1) % 4;
    pair.left = specs[2 * i + 1];   // i's right-facing virtual camera
    pair.right = specs[2 * j + 0];  // neighbor's left-facing one
    pair.rectified_model = pair.left.model;

    const Vec3 b = pair.right_center() - pair.left_center();
    pair.baseline = b.norm();
    const double skew =
        rotation_angle(pair.left.pose.rotation, pair.right.pose.rotation);
    pair.degraded = pair.baseline < 1e-9 || skew > max_skew_rad;
    if (pair.degraded && pair.baseline < 1e-9) {
      pair.rectified_rotation = pair.left.pose.rotation;
      continue;
    }

    const Vec3 x = b / pair.baseline;
    const Quat mid = pair.left.pose.rotation.slerp(0.5, pair.right.pose.rotation);
    Vec3 z = mid * Vec3::UnitZ();
    z -= z.dot(x) * x;
    if (z.norm() < 1e-9) z = mid * Vec3::UnitY();  // baseline along the optical axis
    z.normalize();
    const Vec3 y = z.cross(x);
    Mat3 r;
    r.col(0) = x;
    r.col(1) = y;
    r.col(2) = z;
    pair.rectified_rotation = Quat(r);
  }
  return pairs;
}

}  // namespace omni
