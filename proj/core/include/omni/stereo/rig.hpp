#pragma once

#include <array>

#include "omni/geometry/camera_mei.hpp"
#include "omni/geometry/rotation.hpp"

namespace omni {

/// Four fisheye cameras on the platform corners, indexed A..D
/// counter-clockwise. Poses are body-from-camera.
struct FisheyeRig {
  struct Entry {
    MeiCamera camera;
    SE3Pose body_from_camera;
  };
  std::array<Entry, 4> cameras;
  SE3Pose imu_from_body = SE3Pose::identity();

  /// Ideal square rig: cameras at `radius` meters from the body origin at
  /// yaws 0/90/180/270 degrees, facing outward, optical axis horizontal,
  /// camera y axis up (body z).
  static FisheyeRig ideal_square(const MeiCamera& camera, double radius);

  /// Body-from-camera rotation for an outward-facing camera at azimuth yaw
  /// (camera z out, camera y = body z up).
  static Quat mount_rotation(double yaw);
};

}  // namespace omni
