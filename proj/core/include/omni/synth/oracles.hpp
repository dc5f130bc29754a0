#pragma once

#include <vector>

#include "omni/depth/depth_map.hpp"
#include "omni/synth/render.hpp"

namespace omni {

struct OracleObservation {
  int camera = -1;
  int landmark = -1;
  Vec2 pixel = Vec2::Zero();   // cylindrical tracking-image coordinates
  Vec3 bearing = Vec3::Zero(); // unit ray in the camera frame
};

struct OracleObsOptions {
  double pixel_sigma = 0.0;  // optional Gaussian pixel noise
  uint32_t seed = 0;
  double fov_deg = 190.0;    // visibility cone about the camera axis
};

/// Exact projections of the scene landmarks into the per-camera cylindrical
/// tracking views at one body pose, with FoV and occlusion culling. The
/// cylindrical models are per-fisheye (rotation_from_source identity).
std::vector<OracleObservation> oracle_observations(
    const Scene& scene, const FisheyeRig& rig,
    const std::vector<CylindricalCamera>& cyl_models, const SE3Pose& world_from_body,
    const OracleObsOptions& options = {});

/// Exact ray-cast depth (z along the optical axis) for a pinhole view.
DepthMap oracle_depth(const PinholeCamera& cam, const SE3Pose& world_from_cam,
                      const Scene& scene, const DepthRange& range = {});

}  // namespace omni
