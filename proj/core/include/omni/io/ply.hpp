#pragma once

#include <string>

#include "omni/depth/point_cloud.hpp"
#include "omni/io/errors.hpp"

namespace omni {

/// PLY with float x/y/z/intensity properties; binary little-endian by
/// default, ASCII on request.
void write_ply(const std::string& path, const PointCloud& cloud, bool binary = true);

/// Reads back the formats write_ply produces. Throws IoError / ParseError.
PointCloud read_ply(const std::string& path);

}  // namespace omni
