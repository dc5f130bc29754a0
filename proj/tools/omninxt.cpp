#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "omni/depth/pipeline.hpp"
#include "omni/io/ate.hpp"
#include "omni/io/config.hpp"
#include "omni/io/dataset.hpp"
#include "omni/io/ply.hpp"
#include "omni/io/trajectory_io.hpp"
#include "omni/synth/imu_sim.hpp"
#include "omni/synth/oracles.hpp"
#include "omni/vio/estimator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitAlgorithm = 4;

omni::RigConfig resolve_config(const std::string& config_path,
                               const std::string& dataset_dir) {
  if (!config_path.empty()) return omni::load_config(config_path);
  if (!dataset_dir.empty()) {
    const fs::path bundled = fs::path(dataset_dir) / "rig.yaml";
    if (fs::exists(bundled)) return omni::load_config(bundled.string());
  }
  return omni::reference_config();
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw omni::IoError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

int cmd_sim(const std::string& out_dir, const std::string& config_path,
            const omni::DatasetInfo& info_in) {
  omni::DatasetInfo info = info_in;
  const omni::RigConfig cfg = resolve_config(config_path, "");
  const omni::Trajectory traj(info.trajectory);
  info.num_frames = int(std::floor(info.trajectory.duration * info.fps)) + 1;

  fs::create_directories(fs::path(out_dir) / "frames");

  const omni::Scene scene =
      omni::Scene::room(info.room_half_size, info.room_height, info.seed);

  omni::ImuSimOptions imu_opts;
  imu_opts.rate_hz = info.imu_rate_hz;
  imu_opts.seed = info.seed;
  imu_opts.zero_noise = info.zero_noise;
  const auto imu = omni::simulate_imu(traj, cfg.imu_noise, imu_opts);
  omni::write_imu_csv((fs::path(out_dir) / "imu.csv").string(), imu);

  std::array<omni::DirectionTable, 4> tables;
  for (int c = 0; c < 4; ++c)
    tables[c] = omni::direction_table(cfg.rig.cameras[c].camera);

  omni::TrajectoryData gt;
  for (int f = 0; f < info.num_frames; ++f) {
    const double t = info.frame_time(f);
    const omni::SE3Pose pose = traj.pose(t);
    gt.push_back({t, pose.translation, pose.rotation});
    const auto images = omni::render_rig(cfg.rig, tables, pose, scene);
    for (int c = 0; c < 4; ++c)
      omni::write_pgm(omni::frame_path(out_dir, f, c), images[c]);
  }
  omni::write_tum((fs::path(out_dir) / "groundtruth.tum").string(), gt);
  omni::write_manifest((fs::path(out_dir) / "manifest.json").string(), info);
  omni::save_config((fs::path(out_dir) / "rig.yaml").string(), cfg);

  std::cout << "wrote " << info.num_frames << " frames x 4 cameras, " << imu.size()
            << " IMU samples to " << out_dir << "\n";
  return kExitOk;
}

int cmd_depth(const std::string& dataset, const std::string& config_path,
              const std::string& out_dir, int only_frame, bool sequential,
              bool ascii) {
  const omni::RigConfig cfg = resolve_config(config_path, dataset);
  const omni::DatasetInfo info =
      omni::read_manifest((fs::path(dataset) / "manifest.json").string());

  omni::BlockMatchParams bm;
  bm.min_disparity = cfg.depth.min_disparity;
  bm.max_disparity = cfg.depth.max_disparity;
  omni::PipelineParams pp;
  pp.voxel_leaf = cfg.depth.voxel_leaf;
  pp.depth_range = {cfg.depth.z_min, cfg.depth.z_max};
  pp.concurrent = !sequential;
  omni::DepthPipeline pipeline(cfg.rig,
                               std::make_shared<omni::BlockMatchBackend>(bm),
                               cfg.virtual_cam, pp);

  fs::create_directories(out_dir);
  json report;
  report["concurrent"] = !sequential;
  report["frames"] = json::array();

  for (int f = 0; f < info.num_frames; ++f) {
    if (only_frame >= 0 && f != only_frame) continue;
    const auto images = omni::read_frame(dataset, f);
    const omni::PipelineResult result = pipeline.run(images);

    char name[64];
    std::snprintf(name, sizeof(name), "cloud_%06d.ply", f);
    omni::write_ply((fs::path(out_dir) / name).string(), result.cloud, !ascii);

    json fr;
    fr["frame"] = f;
    fr["points"] = result.cloud.size();
    fr["total_ms"] = result.total_ms;
    fr["fuse_ms"] = result.fuse_ms;
    fr["per_pair_ms"] = json::array();
    for (int p = 0; p < 4; ++p) {
      json pj;
      pj["total_ms"] = result.pair_timings[p].total_ms;
      pj["remap_ms"] = result.pair_timings[p].remap_ms;
      pj["disparity_ms"] = result.pair_timings[p].disparity_ms;
      pj["points_ms"] = result.pair_timings[p].points_ms;
      pj["points"] = result.pair_point_counts[p];
      if (!result.pair_errors[p].empty()) pj["error"] = result.pair_errors[p];
      fr["per_pair_ms"].push_back(pj);
    }
    report["frames"].push_back(fr);
  }
  write_json((fs::path(out_dir) / "timing.json").string(), report);
  return kExitOk;
}

int cmd_vio(const std::string& dataset, const std::string& config_path,
            const std::string& out_path, int cameras,
            const std::string& metrics_path) {
  const omni::RigConfig cfg = resolve_config(config_path, dataset);
  const omni::DatasetInfo info =
      omni::read_manifest((fs::path(dataset) / "manifest.json").string());
  const auto imu = omni::read_imu_csv((fs::path(dataset) / "imu.csv").string());

  std::vector<double> frame_times;
  for (int f = 0; f < info.num_frames; ++f) frame_times.push_back(info.frame_time(f));

  omni::VioStats stats;
  const omni::TrajectoryData traj = omni::run_vio(
      cfg, frame_times, [&](int f) { return omni::read_frame(dataset, f); }, imu,
      cameras == 2, &stats);
  omni::write_tum(out_path, traj);

  json metrics;
  metrics["frames"] = stats.frames;
  metrics["keyframes"] = stats.keyframes;
  metrics["tracking_lost_events"] = stats.tracking_lost_events;
  metrics["solver_failures"] = stats.solver_failures;
  metrics["cameras"] = cameras;

  const fs::path gt_path = fs::path(dataset) / "groundtruth.tum";
  if (fs::exists(gt_path)) {
    const auto gt = omni::read_tum(gt_path.string());
    const omni::AteResult ate = omni::evaluate_ate(traj, gt);
    metrics["ate_rmse_m"] = ate.rmse;
    metrics["ate_mean_m"] = ate.mean;
    metrics["ate_median_m"] = ate.median;
    metrics["ate_max_m"] = ate.max_error;
    metrics["length_m"] = ate.length;
  }
  if (!metrics_path.empty()) write_json(metrics_path, metrics);
  std::cout << metrics.dump(2) << "\n";
  return kExitOk;
}

int cmd_eval_ate(const std::string& est_path, const std::string& ref_path,
                 const std::string& align, const std::string& out_path) {
  const auto est = omni::read_tum(est_path);
  const auto ref = omni::read_tum(ref_path);
  omni::AteOptions opts;
  opts.align_se3 = align == "se3";
  const omni::AteResult ate = omni::evaluate_ate(est, ref, opts);

  json metrics;
  metrics["ate_rmse_m"] = ate.rmse;
  metrics["ate_mean_m"] = ate.mean;
  metrics["ate_median_m"] = ate.median;
  metrics["ate_max_m"] = ate.max_error;
  metrics["length_m"] = ate.length;
  metrics["matches"] = ate.matches;
  metrics["align"] = align;
  if (!out_path.empty()) write_json(out_path, metrics);
  std::cout << metrics.dump(2) << "\n";
  return kExitOk;
}

int cmd_rectify(const std::string& dataset, const std::string& config_path, int frame,
                const std::string& out_dir) {
  const omni::RigConfig cfg = resolve_config(config_path, dataset);
  const auto images = omni::read_frame(dataset, frame);
  const auto specs = omni::build_virtual_extrinsics(cfg.rig, cfg.virtual_cam);
  const auto pairs = omni::make_stereo_pairs(specs);

  fs::create_directories(out_dir);
  for (int p = 0; p < 4; ++p) {
    const omni::StereoPair& pair = pairs[p];
    for (int side = 0; side < 2; ++side) {
      const omni::VirtualCamSpec& spec = side == 0 ? pair.left : pair.right;
      const omni::MeiCamera& fisheye = cfg.rig.cameras[spec.source_index].camera;
      const omni::Quat rotation =
          spec.pose.rotation.conjugate() * pair.rectified_rotation;
      const omni::RemapTable table =
          omni::build_remap_table(fisheye, pair.rectified_model, rotation);
      const omni::Image rectified = omni::apply_remap(table, images[spec.source_index]);
      char name[64];
      std::snprintf(name, sizeof(name), "pair%d_%s.pgm", p,
                    side == 0 ? "left" : "right");
      omni::write_pgm((fs::path(out_dir) / name).string(), rectified);
    }
  }
  std::cout << "wrote 8 rectified views to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Omnidirectional perception stack: simulation, virtual-stereo "
               "depth, visual-inertial odometry, and trajectory evaluation"};
  app.require_subcommand(1);

  // sim
  auto* sim = app.add_subcommand("sim", "Generate a synthetic dataset");
  std::string sim_out, sim_config, sim_kind = "circle", sim_yaw = "follow";
  omni::DatasetInfo info;
  sim->add_option("--out", sim_out, "Output dataset directory")->required();
  sim->add_option("--config", sim_config, "Rig configuration YAML");
  sim->add_option("--trajectory", sim_kind, "circle|infinity|random");
  sim->add_option("--radius", info.trajectory.radius, "Trajectory scale, meters");
  sim->add_option("--speed", info.trajectory.speed, "Cruise speed, m/s");
  sim->add_option("--height", info.trajectory.height, "Flight height, meters");
  sim->add_option("--duration", info.trajectory.duration, "Sequence length, seconds");
  sim->add_option("--static-time", info.trajectory.static_time,
                  "Initial rest interval, seconds");
  sim->add_option("--yaw", sim_yaw, "follow|fixed");
  sim->add_option("--fixed-yaw", info.trajectory.fixed_yaw, "Fixed yaw, radians");
  sim->add_option("--fps", info.fps, "Camera rate, Hz");
  sim->add_option("--imu-rate", info.imu_rate_hz, "IMU rate, Hz");
  sim->add_option("--seed", info.seed, "Random seed");
  sim->add_option("--room-half-size", info.room_half_size, "Room half size, meters");
  sim->add_option("--room-height", info.room_height, "Room height, meters");
  sim->add_flag("--zero-noise", info.zero_noise, "Disable IMU noise");

  // depth
  auto* depth = app.add_subcommand("depth", "Fused omnidirectional point clouds");
  std::string depth_dataset, depth_config, depth_out;
  int depth_frame = -1;
  bool depth_sequential = false, depth_ascii = false;
  depth->add_option("--dataset", depth_dataset, "Dataset directory")->required();
  depth->add_option("--config", depth_config, "Rig configuration YAML");
  depth->add_option("--out", depth_out, "Output directory")->required();
  depth->add_option("--frame", depth_frame, "Process a single frame index");
  depth->add_flag("--sequential", depth_sequential, "Disable concurrent pairs");
  depth->add_flag("--ascii", depth_ascii, "ASCII PLY output");

  // vio
  auto* vio = app.add_subcommand("vio", "Visual-inertial odometry");
  std::string vio_dataset, vio_config, vio_out, vio_metrics;
  int vio_cameras = 4;
  vio->add_option("--dataset", vio_dataset, "Dataset directory")->required();
  vio->add_option("--config", vio_config, "Rig configuration YAML");
  vio->add_option("--out", vio_out, "Output TUM trajectory")->required();
  vio->add_option("--cameras", vio_cameras, "4 or 2")
      ->check(CLI::IsMember({2, 4}));
  vio->add_option("--metrics", vio_metrics, "Metrics JSON output");

  // eval-ate
  auto* eval = app.add_subcommand("eval-ate", "Absolute trajectory error");
  std::string eval_est, eval_ref, eval_align = "se3", eval_out;
  eval->add_option("--estimate", eval_est, "Estimated TUM trajectory")->required();
  eval->add_option("--reference", eval_ref, "Reference TUM trajectory")->required();
  eval->add_option("--align", eval_align, "se3|none")
      ->check(CLI::IsMember({"se3", "none"}));
  eval->add_option("--out", eval_out, "Metrics JSON output");

  // rectify
  auto* rectify = app.add_subcommand("rectify", "Rectified virtual stereo views");
  std::string rect_dataset, rect_config, rect_out;
  int rect_frame = 0;
  rectify->add_option("--dataset", rect_dataset, "Dataset directory")->required();
  rectify->add_option("--config", rect_config, "Rig configuration YAML");
  rectify->add_option("--frame", rect_frame, "Frame index");
  rectify->add_option("--out", rect_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      if (sim_kind == "circle")
        info.trajectory.kind = omni::TrajectoryKind::Circle;
      else if (sim_kind == "infinity")
        info.trajectory.kind = omni::TrajectoryKind::Infinity;
      else if (sim_kind == "random")
        info.trajectory.kind = omni::TrajectoryKind::RandomWaypoint;
      else
        throw omni::ValidationError("unknown trajectory kind: " + sim_kind);
      if (sim_yaw == "follow")
        info.trajectory.yaw_mode = omni::YawMode::FollowVelocity;
      else if (sim_yaw == "fixed")
        info.trajectory.yaw_mode = omni::YawMode::Fixed;
      else
        throw omni::ValidationError("unknown yaw mode: " + sim_yaw);
      if (info.trajectory.speed <= 0.0)
        throw omni::ValidationError("speed must be positive");
      info.trajectory.seed = info.seed;
      return cmd_sim(sim_out, sim_config, info);
    }
    if (depth->parsed())
      return cmd_depth(depth_dataset, depth_config, depth_out, depth_frame,
                       depth_sequential, depth_ascii);
    if (vio->parsed())
      return cmd_vio(vio_dataset, vio_config, vio_out, vio_cameras, vio_metrics);
    if (eval->parsed()) return cmd_eval_ate(eval_est, eval_ref, eval_align, eval_out);
    if (rectify->parsed())
      return cmd_rectify(rect_dataset, rect_config, rect_frame, rect_out);
  } catch (const omni::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const omni::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const omni::IoError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const omni::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const omni::InsufficientOverlap& e) {
    std::cerr << "algorithm failure: " << e.what() << "\n";
    return kExitAlgorithm;
  } catch (const omni::InitializationFailed& e) {
    std::cerr << "algorithm failure: " << e.what() << "\n";
    return kExitAlgorithm;
  } catch (const std::exception& e) {
    std::cerr << "algorithm failure: " << e.what() << "\n";
    return kExitAlgorithm;
  }
  return kExitOk;
}
