#include "omni/depth/pipeline.hpp"

#include <chrono>
#include <future>

namespace omni {

namespace {

double ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

DepthPipeline::DepthPipeline(const FisheyeRig& rig,
                             std::shared_ptr<const DisparityBackend> backend,
                             const VirtualStereoParams& stereo_params,
                             const PipelineParams& params)
    : rig_(rig), backend_(std::move(backend)), params_(params) {
  const auto specs = build_virtual_extrinsics(rig_, stereo_params);
  pairs_ = make_stereo_pairs(specs);
  for (int i = 0; i < 4; ++i) {
    const StereoPair& pair = pairs_[i];
    const auto& left_fe = rig_.cameras[pair.left.source_index];
    const auto& right_fe = rig_.cameras[pair.right.source_index];
    const Quat rot_left =
        left_fe.body_from_camera.rotation.conjugate() * pair.rectified_rotation;
    const Quat rot_right =
        right_fe.body_from_camera.rotation.conjugate() * pair.rectified_rotation;
    left_tables_[i] = build_remap_table(left_fe.camera, pair.rectified_model, rot_left);
    right_tables_[i] = build_remap_table(right_fe.camera, pair.rectified_model, rot_right);
  }
}

PipelineResult DepthPipeline::run(const std::array<Image, 4>& fisheye_images) const {
  const auto t_start = std::chrono::steady_clock::now();
  PipelineResult result;
  std::array<PointCloud, 4> clouds;

  auto process_pair = [&](int i) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const StereoPair& pair = pairs_[i];
      const Image& src_l = fisheye_images[size_t(pair.left.source_index)];
      const Image& src_r = fisheye_images[size_t(pair.right.source_index)];

      auto t = std::chrono::steady_clock::now();
      const Image rect_l = apply_remap(left_tables_[i], src_l);
      const Image rect_r = apply_remap(right_tables_[i], src_r);
      result.pair_timings[i].remap_ms = ms_since(t);

      t = std::chrono::steady_clock::now();
      const DisparityMap disp = backend_->compute(rect_l, rect_r);
      result.pair_timings[i].disparity_ms = ms_since(t);

      t = std::chrono::steady_clock::now();
      const DepthMap depth = disparity_to_depth(disp, pair, params_.depth_range);
      SE3Pose body_from_rect;
      body_from_rect.rotation = pair.rectified_rotation;
      body_from_rect.translation = pair.left_center();
      clouds[i] = depth_to_points(depth, pair.rectified_model, body_from_rect, &rect_l);
      result.pair_timings[i].points_ms = ms_since(t);
      result.pair_point_counts[i] = clouds[i].size();
    } catch (const std::exception& e) {
      clouds[i] = PointCloud{};
      result.pair_errors[i] = e.what();
    }
    result.pair_timings[i].total_ms = ms_since(t0);
  };

  if (params_.concurrent) {
    std::array<std::future<void>, 4> jobs;
    for (int i = 0; i < 4; ++i)
      jobs[i] = std::async(std::launch::async, process_pair, i);
    for (auto& job : jobs) job.get();
  } else {
    for (int i = 0; i < 4; ++i) process_pair(i);
  }

  const auto t_fuse = std::chrono::steady_clock::now();
  result.cloud = fuse_pairs({clouds.begin(), clouds.end()}, params_.voxel_leaf);
  result.fuse_ms = ms_since(t_fuse);
  result.total_ms = ms_since(t_start);
  return result;
}

}  // namespace omni
