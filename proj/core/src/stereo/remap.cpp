#include "omni/stereo/remap.hpp"

namespace omni {

namespace {

template <typename TargetCamera>
RemapTable build_table(const MeiCamera& fisheye, const TargetCamera& target,
                       const Quat& rotation) {
  RemapTable table;
  table.width = target.width;
  table.height = target.height;
  table.src_width = fisheye.width;
  table.src_height = fisheye.height;
  const size_t n = size_t(table.width) * table.height;
  table.map_x.assign(n, 0.0f);
  table.map_y.assign(n, 0.0f);
  table.valid.assign(n, 0);

  const Mat3 r = rotation.toRotationMatrix();
  for (int y = 0; y < table.height; ++y) {
    for (int x = 0; x < table.width; ++x) {
      const Vec3 dir = r * target.unproject(Vec2(x, y));
      if (!fisheye.direction_in_fov(dir)) continue;
      const auto uv = fisheye.project(dir);
      if (!uv) continue;
      if (uv->x() < 0.0 || uv->y() < 0.0 || uv->x() > fisheye.width - 1 ||
          uv->y() > fisheye.height - 1)
        continue;
      const size_t i = table.index(x, y);
      table.map_x[i] = float(uv->x());
      table.map_y[i] = float(uv->y());
      table.valid[i] = 1;
    }
  }
  return table;
}

}  // namespace

RemapTable build_remap_table(const MeiCamera& fisheye, const PinholeCamera& target,
                             const Quat& rotation) {
  return build_table(fisheye, target, rotation);
}

RemapTable build_remap_table(const MeiCamera& fisheye, const CylindricalCamera& target,
                             const Quat& rotation) {
  return build_table(fisheye, target, rotation);
}

Image apply_remap(const RemapTable& table, const Image& src) {
  if (src.width != table.src_width || src.height != table.src_height)
    throw DimensionMismatch("apply_remap: source image does not match table");
  Image out(table.width, table.height, 0);
  for (int y = 0; y < table.height; ++y) {
    for (int x = 0; x < table.width; ++x) {
      const size_t i = table.index(x, y);
      if (!table.valid[i]) continue;
      const double v = src.sample(table.map_x[i], table.map_y[i]);
      out.at(x, y) = uint8_t(v + 0.5);
    }
  }
  return out;
}

}  // namespace omni
