#include "omni/depth/point_cloud.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace omni {

namespace {

struct VoxelKey {
  int64_t x, y, z;
  bool operator==(const VoxelKey&) const = default;
};

struct VoxelKeyHash {
  size_t operator()(const VoxelKey& k) const {
    size_t h = std::hash<int64_t>()(k.x);
    h = h * 1000003u ^ std::hash<int64_t>()(k.y);
    h = h * 1000003u ^ std::hash<int64_t>()(k.z);
    return h;
  }
};

struct Accum {
  Vec3 sum = Vec3::Zero();
  double inten = 0.0;
  int count = 0;
  size_t order = 0;
};

}  // namespace

PointCloud voxel_downsample(const PointCloud& cloud, double leaf) {
  if (leaf <= 0.0) return cloud;
  std::unordered_map<VoxelKey, Accum, VoxelKeyHash> voxels;
  voxels.reserve(cloud.size());
  size_t next_order = 0;
  for (const CloudPoint& p : cloud.points) {
    VoxelKey key{int64_t(std::floor(p.position.x() / leaf)),
                 int64_t(std::floor(p.position.y() / leaf)),
                 int64_t(std::floor(p.position.z() / leaf))};
    auto [it, inserted] = voxels.try_emplace(key);
    if (inserted) it->second.order = next_order++;
    it->second.sum += p.position;
    it->second.inten += p.intensity;
    it->second.count += 1;
  }
  PointCloud out;
  out.points.resize(voxels.size());
  for (const auto& [key, acc] : voxels) {
    CloudPoint pt;
    pt.position = acc.sum / acc.count;
    pt.intensity = float(acc.inten / acc.count);
    out.points[acc.order] = pt;
  }
  return out;
}

PointCloud fuse_pairs(const std::vector<PointCloud>& clouds, double leaf) {
  PointCloud all;
  size_t total = 0;
  for (const auto& c : clouds) total += c.size();
  all.points.reserve(total);
  for (const auto& c : clouds) all.append(c);
  return voxel_downsample(all, leaf);
}

}  // namespace omni
