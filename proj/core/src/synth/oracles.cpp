#include "omni/synth/oracles.hpp"

#include <cmath>
#include <random>

namespace omni {

std::vector<OracleObservation> oracle_observations(
    const Scene& scene, const FisheyeRig& rig,
    const std::vector<CylindricalCamera>& cyl_models, const SE3Pose& world_from_body,
    const OracleObsOptions& options) {
  std::mt19937 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double cos_half_fov = std::cos(0.5 * options.fov_deg * M_PI / 180.0);

  std::vector<OracleObservation> out;
  for (size_t c = 0; c < cyl_models.size() && c < 4; ++c) {
    const SE3Pose world_from_cam = world_from_body * rig.cameras[c].body_from_camera;
    const SE3Pose cam_from_world = world_from_cam.inverse();
    for (size_t l = 0; l < scene.landmarks.size(); ++l) {
      const Vec3 x_c = cam_from_world.act(scene.landmarks[l]);
      const double dist = x_c.norm();
      if (dist < 1e-6) continue;
      const Vec3 bearing = x_c / dist;
      if (bearing.z() < cos_half_fov) continue;

      // Occlusion: nothing may block the ray short of the landmark.
      const Vec3 dir_w = world_from_cam.rotation * bearing;
      const auto hit = raycast(scene, world_from_cam.translation, dir_w);
      if (hit && hit->distance < dist - 1e-3) continue;

      const auto uv = cyl_models[c].project(x_c);
      if (!uv || !cyl_models[c].in_image(*uv)) continue;

      OracleObservation obs;
      obs.camera = int(c);
      obs.landmark = int(l);
      obs.pixel = *uv;
      if (options.pixel_sigma > 0.0)
        obs.pixel += options.pixel_sigma * Vec2(gauss(rng), gauss(rng));
      obs.bearing = cyl_models[c].unproject(obs.pixel);
      out.push_back(obs);
    }
  }
  return out;
}

DepthMap oracle_depth(const PinholeCamera& cam, const SE3Pose& world_from_cam,
                      const Scene& scene, const DepthRange& range) {
  DepthMap z(cam.width, cam.height);
  const Mat3 R = world_from_cam.rotation.toRotationMatrix();
  for (int y = 0; y < cam.height; ++y)
    for (int x = 0; x < cam.width; ++x) {
      // Ray with unit z so the hit distance is z-depth directly.
      const Vec3 dir_cam((x - cam.u0) / cam.fx, (y - cam.v0) / cam.fy, 1.0);
      const auto hit = raycast(scene, world_from_cam.translation, R * dir_cam);
      if (!hit) continue;
      if (hit->distance <= range.z_min || hit->distance >= range.z_max) continue;
      const size_t i = z.index(x, y);
      z.depth[i] = float(hit->distance);
      z.valid[i] = 1;
    }
  return z;
}

}  // namespace omni
