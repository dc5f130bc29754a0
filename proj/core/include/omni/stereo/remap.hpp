#pragma once

#include <stdexcept>
#include <vector>

#include "omni/geometry/camera_cylindrical.hpp"
#include "omni/geometry/camera_mei.hpp"
#include "omni/geometry/camera_pinhole.hpp"
#include "omni/stereo/image.hpp"

namespace omni {

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Precomputed per-pixel lookup from a target (virtual) camera into a source
/// fisheye image. Entries flagged invalid are never sampled.
struct RemapTable {
  int width = 0;
  int height = 0;
  int src_width = 0;
  int src_height = 0;
  std::vector<float> map_x;
  std::vector<float> map_y;
  std::vector<uint8_t> valid;

  size_t index(int x, int y) const { return size_t(y) * width + x; }
};

/// rotation maps target-camera coordinates into the fisheye frame.
RemapTable build_remap_table(const MeiCamera& fisheye, const PinholeCamera& target,
                             const Quat& rotation);
RemapTable build_remap_table(const MeiCamera& fisheye, const CylindricalCamera& target,
                             const Quat& rotation);

/// Bilinear remap; invalid pixels are set to 0. Throws DimensionMismatch when
/// src does not match the table's source size.
Image apply_remap(const RemapTable& table, const Image& src);

}  // namespace omni
