#include "omni/stereo/rig.hpp"

#include <cmath>

namespace omni {

Quat FisheyeRig::mount_rotation(double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  Mat3 r;
  // columns: camera x, y, z axes expressed in body coordinates
  r.col(0) = Vec3(-s, c, 0.0);
  r.col(1) = Vec3(0.0, 0.0, 1.0);
  r.col(2) = Vec3(c, s, 0.0);
  return Quat(r);
}

FisheyeRig FisheyeRig::ideal_square(const MeiCamera& camera, double radius) {
  FisheyeRig rig;
  for (int i = 0; i < 4; ++i) {
    const double yaw = i * M_PI / 2.0;
    rig.cameras[i].camera = camera;
    rig.cameras[i].body_from_camera.rotation = mount_rotation(yaw);
    rig.cameras[i].body_from_camera.translation =
        radius * Vec3(std::cos(yaw), std::sin(yaw), 0.0);
  }
  return rig;
}

}  // namespace omni
