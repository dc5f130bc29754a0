#pragma once

#include <array>
#include <memory>
#include <string>

#include "omni/depth/depth_map.hpp"
#include "omni/depth/disparity.hpp"
#include "omni/stereo/remap.hpp"
#include "omni/stereo/virtual_stereo.hpp"

namespace omni {

struct PairTiming {
  double remap_ms = 0.0;
  double disparity_ms = 0.0;
  double points_ms = 0.0;
  double total_ms = 0.0;
};

struct PipelineResult {
  PointCloud cloud;  // fused, body frame
  std::array<PairTiming, 4> pair_timings;
  std::array<size_t, 4> pair_point_counts{};
  std::array<std::string, 4> pair_errors;  // empty when the pair succeeded
  double fuse_ms = 0.0;
  double total_ms = 0.0;
};

struct PipelineParams {
  DepthRange depth_range;
  double voxel_leaf = 0.05;
  bool concurrent = true;
};

/// Omnidirectional depth pipeline: remap the four fisheye images into the
/// rectified virtual pairs, run the disparity backend per pair, triangulate
/// and fuse into one body-frame cloud. The four per-pair jobs are
/// independent; a failing pair contributes nothing but never aborts the rest.
class DepthPipeline {
 public:
  DepthPipeline(const FisheyeRig& rig, std::shared_ptr<const DisparityBackend> backend,
                const VirtualStereoParams& stereo_params = {},
                const PipelineParams& params = {});

  PipelineResult run(const std::array<Image, 4>& fisheye_images) const;

  const std::array<StereoPair, 4>& pairs() const { return pairs_; }
  const PipelineParams& params() const { return params_; }
  void set_concurrent(bool on) { params_.concurrent = on; }

 private:
  FisheyeRig rig_;
  std::shared_ptr<const DisparityBackend> backend_;
  PipelineParams params_;
  std::array<StereoPair, 4> pairs_;
  std::array<RemapTable, 4> left_tables_;
  std::array<RemapTable, 4> right_tables_;
};

}  // namespace omni
