#include "omni/synth/render.hpp"

#include <cmath>
#include <future>

namespace omni {

DirectionTable direction_table(const MeiCamera& cam) {
  DirectionTable t;
  t.width = cam.width;
  t.height = cam.height;
  t.dirs.assign(size_t(cam.width) * cam.height, Vec3::Zero());
  t.valid.assign(size_t(cam.width) * cam.height, 0);
  for (int y = 0; y < cam.height; ++y)
    for (int x = 0; x < cam.width; ++x) {
      const Vec2 uv(x, y);
      if (!cam.pixel_in_fov(uv)) continue;
      const auto dir = cam.unproject(uv);
      if (!dir) continue;
      const size_t i = size_t(y) * cam.width + x;
      t.dirs[i] = *dir;
      t.valid[i] = 1;
    }
  return t;
}

DirectionTable direction_table(const PinholeCamera& cam) {
  DirectionTable t;
  t.width = cam.width;
  t.height = cam.height;
  t.dirs.resize(size_t(cam.width) * cam.height);
  t.valid.assign(size_t(cam.width) * cam.height, 1);
  for (int y = 0; y < cam.height; ++y)
    for (int x = 0; x < cam.width; ++x)
      t.dirs[size_t(y) * cam.width + x] = cam.unproject(Vec2(x, y)).normalized();
  return t;
}

DirectionTable direction_table(const CylindricalCamera& cam) {
  DirectionTable t;
  t.width = cam.width;
  t.height = cam.height;
  t.dirs.resize(size_t(cam.width) * cam.height);
  t.valid.assign(size_t(cam.width) * cam.height, 1);
  for (int y = 0; y < cam.height; ++y)
    for (int x = 0; x < cam.width; ++x)
      t.dirs[size_t(y) * cam.width + x] = cam.unproject(Vec2(x, y));
  return t;
}

Image render_with_table(const DirectionTable& table, const SE3Pose& world_from_cam,
                        const Scene& scene) {
  Image img(table.width, table.height, 0);
  const Mat3 R = world_from_cam.rotation.toRotationMatrix();
  for (int y = 0; y < table.height; ++y) {
    for (int x = 0; x < table.width; ++x) {
      const size_t i = size_t(y) * table.width + x;
      if (!table.valid[i]) continue;
      const Vec3 dir = R * table.dirs[i];
      const auto hit = raycast(scene, world_from_cam.translation, dir);
      if (!hit) continue;
      const double value = texture_value(scene.planes[hit->plane], hit->uv);
      img.at(x, y) = uint8_t(std::lround(std::clamp(value, 0.0, 255.0)));
    }
  }
  return img;
}

Image render_fisheye(const MeiCamera& cam, const SE3Pose& world_from_cam,
                     const Scene& scene) {
  return render_with_table(direction_table(cam), world_from_cam, scene);
}

Image render_pinhole(const PinholeCamera& cam, const SE3Pose& world_from_cam,
                     const Scene& scene) {
  return render_with_table(direction_table(cam), world_from_cam, scene);
}

Image render_cylindrical(const CylindricalCamera& cam, const SE3Pose& world_from_cam,
                         const Scene& scene) {
  return render_with_table(direction_table(cam), world_from_cam, scene);
}

std::array<Image, 4> render_rig(const FisheyeRig& rig,
                                const std::array<DirectionTable, 4>& tables,
                                const SE3Pose& world_from_body, const Scene& scene) {
  std::array<std::future<Image>, 4> jobs;
  for (int c = 0; c < 4; ++c) {
    jobs[c] = std::async(std::launch::async, [&, c] {
      return render_with_table(tables[c],
                               world_from_body * rig.cameras[c].body_from_camera,
                               scene);
    });
  }
  std::array<Image, 4> out;
  for (int c = 0; c < 4; ++c) out[c] = jobs[c].get();
  return out;
}

}  // namespace omni
