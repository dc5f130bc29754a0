#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "omni/depth/disparity.hpp"
#include "omni/depth/pipeline.hpp"
#include "omni/depth/point_cloud.hpp"
#include "omni/io/config.hpp"
#include "omni/stereo/remap.hpp"
#include "omni/synth/imu_sim.hpp"
#include "omni/synth/render.hpp"
#include "omni/vio/preintegration.hpp"

using namespace omni;

namespace {

Image noise_image(int w, int h, uint32_t seed) {
  Image img(w, h);
  std::mt19937 rng(seed);
  for (auto& px : img.data) px = uint8_t(rng() % 256);
  return img;
}

const RigConfig& rig_config() {
  static const RigConfig cfg = reference_config();
  return cfg;
}

void BM_BuildRemapTable(benchmark::State& state) {
  const MeiCamera fisheye = rig_config().rig.cameras[0].camera;
  const PinholeCamera target = PinholeCamera::with_hfov(100.0, 320, 240);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_remap_table(fisheye, target, rot_y(M_PI / 4)));
}
BENCHMARK(BM_BuildRemapTable)->Unit(benchmark::kMillisecond);

void BM_ApplyRemap(benchmark::State& state) {
  const MeiCamera fisheye = rig_config().rig.cameras[0].camera;
  const PinholeCamera target = PinholeCamera::with_hfov(100.0, 320, 240);
  const RemapTable table = build_remap_table(fisheye, target, rot_y(M_PI / 4));
  const Image src = noise_image(fisheye.width, fisheye.height, 1);
  for (auto _ : state) benchmark::DoNotOptimize(apply_remap(table, src));
}
BENCHMARK(BM_ApplyRemap)->Unit(benchmark::kMillisecond);

void BM_BlockMatch(benchmark::State& state) {
  const Image right = noise_image(320, 240, 2);
  Image left(320, 240);
  for (int y = 0; y < 240; ++y)
    for (int x = 0; x < 320; ++x) left.at(x, y) = right.at(std::max(0, x - 8), y);
  for (auto _ : state) benchmark::DoNotOptimize(block_match_disparity(left, right));
}
BENCHMARK(BM_BlockMatch)->Unit(benchmark::kMillisecond);

void BM_DepthPipelineFrame(benchmark::State& state) {
  const FisheyeRig& rig = rig_config().rig;
  const Scene scene = Scene::room(2.5, 2.0, 3);
  SE3Pose body;
  body.translation = Vec3(0, 0, 1.0);
  std::array<DirectionTable, 4> tables;
  for (int c = 0; c < 4; ++c)
    tables[size_t(c)] = direction_table(rig.cameras[size_t(c)].camera);
  const std::array<Image, 4> images = render_rig(rig, tables, body, scene);
  DepthPipeline pipeline(rig, std::make_shared<BlockMatchBackend>());
  for (auto _ : state) benchmark::DoNotOptimize(pipeline.run(images));
}
BENCHMARK(BM_DepthPipelineFrame)->Unit(benchmark::kMillisecond);

void BM_Preintegrate(benchmark::State& state) {
  TrajectorySpec spec;
  spec.duration = 2.0;
  const Trajectory traj(spec);
  ImuSimOptions opts;
  opts.rate_hz = 500.0;
  opts.zero_noise = true;
  const auto imu = simulate_imu(traj, {}, opts);
  // One keyframe interval's worth of samples at 500 Hz.
  const std::vector<ImuSample> slice(imu.begin(), imu.begin() + 250);
  for (auto _ : state)
    benchmark::DoNotOptimize(preintegrate(slice, Vec3::Zero(), Vec3::Zero(), {}));
}
BENCHMARK(BM_Preintegrate)->Unit(benchmark::kMicrosecond);

void BM_RenderFisheye(benchmark::State& state) {
  const MeiCamera cam = rig_config().rig.cameras[0].camera;
  const Scene scene = Scene::room(2.5, 2.0, 5);
  SE3Pose pose;
  pose.translation = Vec3(0, 0, 1.0);
  const DirectionTable table = direction_table(cam);
  for (auto _ : state)
    benchmark::DoNotOptimize(render_with_table(table, pose, scene));
}
BENCHMARK(BM_RenderFisheye)->Unit(benchmark::kMillisecond);

void BM_VoxelDownsample(benchmark::State& state) {
  PointCloud cloud;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200000; ++i)
    cloud.points.push_back({Vec3(u(rng), u(rng), u(rng)), float(i % 256)});
  for (auto _ : state) benchmark::DoNotOptimize(voxel_downsample(cloud, 0.05));
}
BENCHMARK(BM_VoxelDownsample)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
