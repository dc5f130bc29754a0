#pragma once

#include <array>

#include "omni/geometry/camera_cylindrical.hpp"
#include "omni/geometry/camera_mei.hpp"
#include "omni/geometry/camera_pinhole.hpp"
#include "omni/stereo/image.hpp"
#include "omni/stereo/rig.hpp"
#include "omni/synth/scene.hpp"

namespace omni {

/// Precomputed per-pixel unit ray directions in the camera frame; pixels
/// outside the model's valid domain are flagged. Reusable across frames.
struct DirectionTable {
  int width = 0;
  int height = 0;
  std::vector<Vec3> dirs;
  std::vector<uint8_t> valid;
};

DirectionTable direction_table(const MeiCamera& cam);
DirectionTable direction_table(const PinholeCamera& cam);
DirectionTable direction_table(const CylindricalCamera& cam);

/// Ray-casts every valid pixel into the scene: nearest plane hit, procedural
/// texture value, rounded to 8 bits; misses and invalid pixels render as 0.
Image render_with_table(const DirectionTable& table, const SE3Pose& world_from_cam,
                        const Scene& scene);

Image render_fisheye(const MeiCamera& cam, const SE3Pose& world_from_cam,
                     const Scene& scene);
Image render_pinhole(const PinholeCamera& cam, const SE3Pose& world_from_cam,
                     const Scene& scene);
Image render_cylindrical(const CylindricalCamera& cam, const SE3Pose& world_from_cam,
                         const Scene& scene);

/// The four fisheye views at one body pose; cameras rendered concurrently.
std::array<Image, 4> render_rig(const FisheyeRig& rig,
                                const std::array<DirectionTable, 4>& tables,
                                const SE3Pose& world_from_body, const Scene& scene);

}  // namespace omni
