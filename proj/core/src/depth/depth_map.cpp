#include "omni/depth/depth_map.hpp"

namespace omni {

int DepthMap::valid_count() const {
  int n = 0;
  for (uint8_t v : valid) n += v;
  return n;
}

DepthMap disparity_to_depth(const DisparityMap& d, const StereoPair& pair,
                            const DepthRange& range) {
  DepthMap out(d.width, d.height);
  const double fx = pair.rectified_model.fx;
  const double b = pair.baseline;
  for (size_t i = 0; i < d.disparity.size(); ++i) {
    if (!d.valid[i]) continue;
    const double disp = d.disparity[i];
    if (disp <= 0.0) continue;
    const double z = fx * b / disp;
    if (z <= range.z_min || z >= range.z_max) continue;
    out.depth[i] = float(z);
    out.valid[i] = 1;
  }
  return out;
}

PointCloud depth_to_points(const DepthMap& z, const PinholeCamera& cam,
                           const SE3Pose& cam_pose, const Image* intensity) {
  PointCloud cloud;
  cloud.points.reserve(size_t(z.valid_count()));
  for (int y = 0; y < z.height; ++y) {
    for (int x = 0; x < z.width; ++x) {
      const size_t i = z.index(x, y);
      if (!z.valid[i]) continue;
      const Vec3 p_cam((x - cam.u0) / cam.fx * z.depth[i],
                       (y - cam.v0) / cam.fy * z.depth[i], z.depth[i]);
      CloudPoint pt;
      pt.position = cam_pose.act(p_cam);
      if (intensity) pt.intensity = float(intensity->at(x, y));
      cloud.points.push_back(pt);
    }
  }
  return cloud;
}

}  // namespace omni
