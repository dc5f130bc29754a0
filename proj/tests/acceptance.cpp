// End-to-end acceptance gate: one pass/fail line per criterion, nonzero exit
// if any criterion fails. Each criterion also enforces its wall-clock budget.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <vector>

#include "omni/depth/pipeline.hpp"
#include "omni/io/ate.hpp"
#include "omni/io/config.hpp"
#include "omni/synth/imu_sim.hpp"
#include "omni/synth/render.hpp"
#include "omni/vio/estimator.hpp"
#include "omni/vio/marginalization.hpp"
#include "omni/vio/optimizer.hpp"
#include "synthetic_window.hpp"

using namespace omni;
using omni::testing::SyntheticWorld;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.str().empty()) detail << "; ";
      detail << what;
    }
  }
};

MeiCamera reference_fisheye() { return reference_config().rig.cameras[0].camera; }

// ---------------------------------------------------------------------------
// 1. Projection round trips.
// ---------------------------------------------------------------------------
void criterion_round_trips(Check& c) {
  std::mt19937 rng(1);

  const MeiCamera mei = reference_fisheye();
  std::uniform_real_distribution<double> ux(0.0, mei.width - 1.0);
  std::uniform_real_distribution<double> uy(0.0, mei.height - 1.0);
  double worst_mei = 0.0;
  int n = 0;
  while (n < 100000) {
    const Vec2 uv(ux(rng), uy(rng));
    if (!mei.pixel_in_fov(uv)) continue;
    const auto dir = mei.unproject(uv);
    if (!dir) continue;
    const auto back = mei.project(*dir);
    c.require(back.has_value(), "mei re-projection failed");
    if (!back) return;
    worst_mei = std::max(worst_mei, (*back - uv).norm());
    ++n;
  }
  c.require(worst_mei <= 1e-6, "mei round trip " + std::to_string(worst_mei) + " px");

  const CylindricalCamera cyl = CylindricalCamera::with_fov(190.0, 400, 160);
  std::uniform_real_distribution<double> cx(0.0, cyl.width - 1.0);
  std::uniform_real_distribution<double> cy(0.0, cyl.height - 1.0);
  double worst_cyl = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const Vec2 uv(cx(rng), cy(rng));
    const auto back = cyl.project(cyl.unproject(uv));
    c.require(back.has_value(), "cylindrical re-projection failed");
    if (!back) return;
    worst_cyl = std::max(worst_cyl, (*back - uv).norm());
  }
  c.require(worst_cyl <= 1e-9,
            "cylindrical round trip " + std::to_string(worst_cyl) + " px");

  const PinholeCamera pin = PinholeCamera::with_hfov(100.0, 320, 240);
  std::uniform_real_distribution<double> px(0.0, pin.width - 1.0);
  std::uniform_real_distribution<double> py(0.0, pin.height - 1.0);
  double worst_pin = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const Vec2 uv(px(rng), py(rng));
    const auto back = pin.project(pin.unproject(uv));
    c.require(back.has_value(), "pinhole re-projection failed");
    if (!back) return;
    worst_pin = std::max(worst_pin, (*back - uv).norm());
  }
  c.require(worst_pin <= 1e-9, "pinhole round trip " + std::to_string(worst_pin) + " px");
}

// ---------------------------------------------------------------------------
// 2. Projection Jacobians against central differences.
// ---------------------------------------------------------------------------
template <typename Camera>
int check_jacobians(const Camera& cam, std::mt19937& rng, int points, Check& c) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> range(0.5, 8.0);
  int done = 0;
  for (int k = 0; k < points * 20 && done < points; ++k) {
    Vec3 p(u(rng), u(rng), 1.0 + 0.5 * u(rng));
    p = p.normalized() * range(rng);
    Eigen::Matrix<double, 2, 3> jac;
    if (!cam.project(p, &jac)) continue;
    const double h = 1e-6;
    bool all_defined = true;
    Eigen::Matrix<double, 2, 3> fd;
    for (int i = 0; i < 3 && all_defined; ++i) {
      Vec3 hi = p, lo = p;
      hi(i) += h;
      lo(i) -= h;
      const auto a = cam.project(hi);
      const auto b = cam.project(lo);
      if (!a || !b) {
        all_defined = false;
        break;
      }
      fd.col(i) = (*a - *b) / (2.0 * h);
    }
    if (!all_defined) continue;
    const double scale = std::max(1.0, fd.norm());
    c.require((jac - fd).norm() / scale < 1e-5, "jacobian mismatch");
    ++done;
  }
  return done;
}

void criterion_jacobians(Check& c) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int configs = 0;
  for (int k = 0; k < 40; ++k) {
    MeiCamera cam;
    cam.xi = 2.0 * u(rng);
    cam.fx = 100.0 + 300.0 * u(rng);
    cam.fy = 100.0 + 300.0 * u(rng);
    cam.u0 = 150.0 + 200.0 * u(rng);
    cam.v0 = 150.0 + 200.0 * u(rng);
    cam.width = 640;
    cam.height = 640;
    cam.distortion = {0.1 * (u(rng) - 0.5), 0.02 * (u(rng) - 0.5),
                      0.002 * (u(rng) - 0.5), 0.002 * (u(rng) - 0.5)};
    if (check_jacobians(cam, rng, 5, c) >= 3) ++configs;
  }
  for (int k = 0; k < 35; ++k) {
    CylindricalCamera cam = CylindricalCamera::with_fov(90.0 + 180.0 * u(rng),
                                                        200 + int(300 * u(rng)),
                                                        100 + int(200 * u(rng)));
    cam.rotation_from_source = exp_so3(0.3 * Vec3(u(rng), u(rng), u(rng)));
    if (check_jacobians(cam, rng, 5, c) >= 3) ++configs;
  }
  for (int k = 0; k < 35; ++k) {
    PinholeCamera cam = PinholeCamera::with_hfov(40.0 + 90.0 * u(rng),
                                                 200 + int(300 * u(rng)),
                                                 150 + int(200 * u(rng)));
    if (check_jacobians(cam, rng, 5, c) >= 3) ++configs;
  }
  c.require(configs >= 100, "only " + std::to_string(configs) + " configs checked");
}

// ---------------------------------------------------------------------------
// 3. Virtual-stereo rectification.
// ---------------------------------------------------------------------------
void criterion_rectification(Check& c) {
  const auto pairs = make_stereo_pairs(build_virtual_extrinsics(reference_config().rig));
  std::mt19937 rng(3);
  for (size_t i = 0; i < pairs.size(); ++i) {
    const StereoPair& pair = pairs[i];
    c.require(!pair.degraded, "pair degraded");
    c.require(rotation_angle(pair.left.pose.rotation, pair.right.pose.rotation) < 1e-10,
              "facing rotations differ");

    const PinholeCamera& model = pair.rectified_model;
    std::uniform_real_distribution<double> ux(10.0, model.width - 11.0);
    std::uniform_real_distribution<double> uy(10.0, model.height - 11.0);
    std::uniform_real_distribution<double> uz(1.0, 6.0);
    double worst_row = 0.0;
    int accepted = 0;
    for (int k = 0; k < 100000 && accepted < 1000; ++k) {
      const Vec2 uv_l(ux(rng), uy(rng));
      const double z = uz(rng);
      // Body-frame point seen from the left rectified camera.
      const Vec3 x_body =
          pair.left_center() + pair.rectified_rotation * (z * model.unproject(uv_l));
      const Vec3 x_r =
          pair.rectified_rotation.conjugate() * (x_body - pair.right_center());
      const auto uv_r = model.project(x_r);
      if (!uv_r || !model.in_image(*uv_r)) continue;
      worst_row = std::max(worst_row, std::abs(uv_r->y() - uv_l.y()));
      c.require(uv_l.x() - uv_r->x() > 0.0, "non-positive disparity");
      ++accepted;
    }
    c.require(accepted == 1000, "insufficient common-view samples");
    c.require(worst_row < 0.05,
              "row misalignment " + std::to_string(worst_row) + " px");
  }
}

// ---------------------------------------------------------------------------
// 4. Depth pipeline against the room's wall planes.
// ---------------------------------------------------------------------------
class OracleDisparityBackend : public DisparityBackend {
 public:
  OracleDisparityBackend(const StereoPair& pair, const Scene& scene,
                         const SE3Pose& world_from_body)
      : pair_(pair), scene_(scene), world_from_body_(world_from_body) {}

  DisparityMap compute(const Image& left, const Image&) const override {
    SE3Pose cam_pose;
    cam_pose.rotation = pair_.rectified_rotation;
    cam_pose.translation = pair_.left_center();
    const DepthMap z = oracle_depth(pair_.rectified_model, world_from_body_ * cam_pose,
                                    scene_, DepthRange{0.05, 100.0});
    DisparityMap d(left.width, left.height);
    for (size_t i = 0; i < z.depth.size(); ++i) {
      if (!z.valid[i]) continue;
      d.disparity[i] =
          float(pair_.rectified_model.fx * pair_.baseline / double(z.depth[i]));
      d.valid[i] = 1;
    }
    return d;
  }
  const char* name() const override { return "oracle"; }

 private:
  StereoPair pair_;
  Scene scene_;
  SE3Pose world_from_body_;
};

struct WallFit {
  double bias = 0.0;
  double rms = 0.0;
  int count = 0;
};

std::array<WallFit, 4> fit_walls(const PointCloud& cloud, double half, double height,
                                 double max_range) {
  std::array<WallFit, 4> fits{};
  std::array<double, 4> sq{};
  for (const auto& pt : cloud.points) {
    const Vec3& p = pt.position;
    if (p.norm() > max_range) continue;
    if (p.z() < -0.3 || p.z() > height - 0.05) continue;
    const double d[4] = {p.x() - half, p.y() - half, -half - p.x(), -half - p.y()};
    int wall = 0;
    for (int i = 1; i < 4; ++i)
      if (std::abs(d[i]) < std::abs(d[wall])) wall = i;
    if (std::abs(d[wall]) > 0.3) continue;
    fits[size_t(wall)].bias += d[wall];
    sq[size_t(wall)] += d[wall] * d[wall];
    fits[size_t(wall)].count += 1;
  }
  for (int i = 0; i < 4; ++i) {
    if (fits[size_t(i)].count == 0) continue;
    fits[size_t(i)].bias /= fits[size_t(i)].count;
    fits[size_t(i)].rms = std::sqrt(sq[size_t(i)] / fits[size_t(i)].count);
  }
  return fits;
}

void criterion_depth(Check& c) {
  const FisheyeRig rig = reference_config().rig;
  const Scene scene = Scene::room(2.5, 2.0, 7);
  SE3Pose body;
  body.translation = Vec3(0, 0, 1.0);

  std::array<DirectionTable, 4> tables;
  for (int i = 0; i < 4; ++i)
    tables[size_t(i)] = direction_table(rig.cameras[size_t(i)].camera);
  const std::array<Image, 4> images = render_rig(rig, tables, body, scene);

  DepthPipeline pipeline(rig, std::make_shared<BlockMatchBackend>());
  const PipelineResult result = pipeline.run(images);
  const auto fits = fit_walls(result.cloud, 2.5, 2.0 - 1.0, 3.0);
  for (const auto& fit : fits) {
    c.require(fit.count > 100, "too few wall points");
    c.require(std::abs(fit.bias) < 0.05,
              "block-match wall bias " + std::to_string(fit.bias));
    c.require(fit.rms < 0.08, "block-match wall rms " + std::to_string(fit.rms));
  }

  const auto pairs = make_stereo_pairs(build_virtual_extrinsics(rig));
  PointCloud fused;
  for (int i = 0; i < 4; ++i) {
    const StereoPair& pair = pairs[size_t(i)];
    OracleDisparityBackend backend(pair, scene, body);
    const DisparityMap d = backend.compute(Image(320, 240), Image(320, 240));
    const DepthMap z = disparity_to_depth(d, pair);
    SE3Pose cam_pose;
    cam_pose.rotation = pair.rectified_rotation;
    cam_pose.translation = pair.left_center();
    fused.append(depth_to_points(z, pair.rectified_model, cam_pose));
  }
  fused = voxel_downsample(fused, 0.05);
  const auto oracle_fits = fit_walls(fused, 2.5, 2.0 - 1.0, 3.0);
  for (const auto& fit : oracle_fits) {
    c.require(fit.count > 100, "too few oracle wall points");
    c.require(fit.rms < 0.01, "oracle wall rms " + std::to_string(fit.rms));
  }
}

// ---------------------------------------------------------------------------
// 5. IMU preintegration against dense integration of the true trajectory.
// ---------------------------------------------------------------------------
void criterion_preintegration(Check& c) {
  const SyntheticWorld world;
  const Vec3 g(0, 0, -9.81);
  for (int k = 0; k < 5; ++k) {
    const double t0 = 1.0 + 0.5 * k, t1 = t0 + 0.5;
    const auto pre = preintegrate(world.imu_slice(t0, t1), Vec3::Zero(), Vec3::Zero(), {});
    const TrajectorySample a = world.trajectory.sample(t0);
    const TrajectorySample b = world.trajectory.sample(t1);
    const double dt = pre.dt_total;
    const Quat Rt = a.q.conjugate();
    const Vec3 want_p = Rt * (b.p - a.p - a.v * dt - 0.5 * g * dt * dt);
    const Vec3 want_v = Rt * (b.v - a.v - g * dt);
    const Quat want_q = Rt * b.q;
    c.require((pre.delta_p - want_p).norm() < 1e-6, "delta_p error");
    c.require((pre.delta_v - want_v).norm() < 1e-6, "delta_v error");
    c.require(rotation_angle(pre.delta_q, want_q) < 1e-6, "delta_q error");
  }

  // First-order bias correction against full re-preintegration.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1e-3, 1e-3);
  const auto samples = world.imu_slice(2.0, 2.5);
  const auto base = preintegrate(samples, Vec3::Zero(), Vec3::Zero(), {});
  for (int k = 0; k < 20; ++k) {
    const Vec3 dba(u(rng), u(rng), u(rng));
    const Vec3 dbg(u(rng), u(rng), u(rng));
    Vec3 p, v;
    Quat q;
    base.corrected(dba, dbg, &p, &q, &v);
    const auto exact = preintegrate(samples, dba, dbg, {});
    const double scale = std::max({exact.delta_p.norm(), exact.delta_v.norm(), 1e-3});
    c.require((p - exact.delta_p).norm() / scale < 1e-4, "bias-corrected delta_p");
    c.require((v - exact.delta_v).norm() / scale < 1e-4, "bias-corrected delta_v");
    c.require(rotation_angle(q, exact.delta_q) < 1e-4, "bias-corrected delta_q");
  }
}

// ---------------------------------------------------------------------------
// 6. Optimizer recovery on a perturbed noiseless window.
// ---------------------------------------------------------------------------
void criterion_optimizer(Check& c) {
  const SyntheticWorld world;
  std::vector<double> times;
  for (int i = 0; i < 11; ++i) times.push_back(1.0 + 0.35 * i);
  SlidingWindow w = world.build_window(times);
  const SlidingWindow truth = w;

  std::mt19937 rng(71);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (size_t i = 1; i < w.keyframes.size(); ++i) {
    w.keyframes[i].p += 0.05 * Vec3(u(rng), u(rng), u(rng)).normalized();
    w.keyframes[i].q =
        w.keyframes[i].q *
        exp_so3((2.0 * M_PI / 180.0) * Vec3(u(rng), u(rng), u(rng)).normalized());
    w.keyframes[i].v += 0.02 * Vec3(u(rng), u(rng), u(rng));
  }
  for (auto& [id, track] : w.tracks) track.inverse_depth *= 1.0 + 0.05 * u(rng);

  const OptimizeReport report = optimize_window(w, world.cyl_models);
  c.require(report.iterations <= 15,
            "took " + std::to_string(report.iterations) + " iterations");
  c.require(report.final_cost <= report.initial_cost, "cost increased");
  for (size_t i = 0; i < w.keyframes.size(); ++i) {
    c.require((w.keyframes[i].p - truth.keyframes[i].p).norm() < 1e-4,
              "position not recovered");
    c.require(rotation_angle(w.keyframes[i].q, truth.keyframes[i].q) < 1e-4,
              "attitude not recovered");
  }
}

// ---------------------------------------------------------------------------
// 7. Marginalization: Schur complement and sliding-vs-batch consistency.
// ---------------------------------------------------------------------------
void criterion_marginalization(Check& c) {
  // Closed-form Gaussian marginal.
  std::mt19937 rng(89);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd A(30, 12);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 12; ++j) A(i, j) = n(rng);
  const Eigen::MatrixXd H = A.transpose() * A + 0.1 * Eigen::MatrixXd::Identity(12, 12);
  const Eigen::MatrixXd H_mm = H.topLeftCorner(5, 5);
  const Eigen::MatrixXd H_mr = H.topRightCorner(5, 7);
  const Eigen::MatrixXd H_rr = H.bottomRightCorner(7, 7);
  const Eigen::MatrixXd schur = H_rr - H_mr.transpose() * H_mm.inverse() * H_mr;
  const Eigen::MatrixXd cov_rr = H.inverse().bottomRightCorner(7, 7);
  c.require((schur - cov_rr.inverse()).norm() < 1e-10 * std::max(1.0, schur.norm()),
            "Schur complement mismatch");

  // 20-keyframe sliding run against the full batch solution.
  const SyntheticWorld world(3, 14.0);
  const int total = 20;
  std::vector<double> times;
  for (int i = 0; i < total; ++i) times.push_back(1.0 + 0.3 * i);
  SlidingWindow batch = world.build_window(times);
  optimize_window(batch, world.cyl_models);

  const SlidingWindow full = world.build_window(times);
  std::vector<Vec3> sliding_p(total);
  SlidingWindow w;
  w.gravity = full.gravity;
  w.extrinsics = full.extrinsics;
  for (int i = 0; i < total; ++i) {
    w.keyframes.push_back(full.keyframes[size_t(i)]);
    w.keyframe_ids.push_back(i);
    if (i > 0) w.preintegrations.push_back(full.preintegrations[size_t(i - 1)]);
    for (const auto& [id, track] : full.tracks) {
      const FeatureObservation* obs = nullptr;
      for (const auto& o : track.observations)
        if (o.keyframe_id == i) {
          obs = &o;
          break;
        }
      if (!obs) continue;
      FeatureTrack& mine = w.tracks[id];
      if (mine.id < 0) {
        mine.id = id;
        mine.anchor_keyframe = i;
        mine.anchor_camera = obs->camera;
      }
      mine.observations.push_back(*obs);
    }
    for (auto& [id, track] : w.tracks) {
      if (track.initialized()) continue;
      double lambda = 0.0;
      if (triangulate_feature(track, w, &lambda) == TriangulationStatus::Ok)
        track.inverse_depth = lambda;
    }
    if (w.size() >= 2) optimize_window(w, world.cyl_models);
    for (int k = 0; k < w.size(); ++k)
      sliding_p[size_t(w.keyframe_ids[size_t(k)])] = w.keyframes[size_t(k)].p;
    if (w.size() > 11) marginalize_oldest(w, world.cyl_models);
  }
  for (int i = 0; i < total; ++i) {
    const int bi = batch.index_of(i);
    c.require(bi >= 0, "keyframe missing from batch");
    if (bi < 0) continue;
    const double err = (sliding_p[size_t(i)] - batch.keyframes[size_t(bi)].p).norm();
    c.require(err < 1e-3, "sliding/batch divergence " + std::to_string(err));
  }
}

// ---------------------------------------------------------------------------
// 8. Closed-loop VIO across five seeds, four cameras versus two.
// ---------------------------------------------------------------------------
void criterion_vio_seeds(Check& c) {
  const RigConfig cfg = reference_config();
  std::array<DirectionTable, 4> tables;
  for (int i = 0; i < 4; ++i)
    tables[size_t(i)] = direction_table(cfg.rig.cameras[size_t(i)].camera);

  for (uint32_t seed = 1; seed <= 5; ++seed) {
    TrajectorySpec spec = SyntheticWorld::make_spec(12.0);
    const Trajectory traj(spec);
    const Scene scene = Scene::room(3.0, 2.0, seed);

    std::vector<double> frame_times;
    std::vector<std::array<Image, 4>> frames;
    TrajectoryData truth;
    for (int i = 0; i < 120; ++i) {
      const double t = 0.1 * i;
      frame_times.push_back(t);
      frames.push_back(render_rig(cfg.rig, tables, traj.pose(t), scene));
      const TrajectorySample s = traj.sample(t);
      truth.push_back({t, s.p, s.q});
    }
    ImuSimOptions imu_opts;
    imu_opts.rate_hz = cfg.imu_rate_hz;
    imu_opts.zero_noise = true;
    const auto imu = simulate_imu(traj, cfg.imu_noise, imu_opts);
    auto load = [&](int i) { return frames[size_t(i)]; };

    const TrajectoryData est4 = run_vio(cfg, frame_times, load, imu, false);
    const TrajectoryData est2 = run_vio(cfg, frame_times, load, imu, true);
    const AteResult ate4 = evaluate_ate(est4, truth);
    const AteResult ate2 = evaluate_ate(est2, truth);
    std::ostringstream tag;
    tag << "seed " << seed << ": 4cam " << ate4.rmse << " m, 2cam " << ate2.rmse
        << " m, path " << ate4.length << " m";
    c.require(ate4.rmse < 0.01 * ate4.length, tag.str() + " (over 1% of path)");
    c.require(ate4.rmse <= ate2.rmse, tag.str() + " (4cam worse than 2cam)");
  }
}

// ---------------------------------------------------------------------------
// 9. Concurrent depth pipeline: determinism always, speedup in perf profile.
// ---------------------------------------------------------------------------
void criterion_concurrency(Check& c) {
  const FisheyeRig rig = reference_config().rig;
  const Scene scene = Scene::room(2.5, 2.0, 11);
  std::array<DirectionTable, 4> tables;
  for (int i = 0; i < 4; ++i)
    tables[size_t(i)] = direction_table(rig.cameras[size_t(i)].camera);

  std::vector<std::array<Image, 4>> frames;
  for (int i = 0; i < 4; ++i) {
    SE3Pose body;
    body.translation = Vec3(0.2 * i - 0.3, 0.1 * i, 1.0);
    body.rotation = rot_z(0.3 * i);
    frames.push_back(render_rig(rig, tables, body, scene));
  }

  DepthPipeline pipeline(rig, std::make_shared<BlockMatchBackend>());
  using clock = std::chrono::steady_clock;

  pipeline.set_concurrent(true);
  const auto t0 = clock::now();
  std::vector<PipelineResult> conc;
  for (const auto& f : frames) conc.push_back(pipeline.run(f));
  const double conc_s = std::chrono::duration<double>(clock::now() - t0).count();

  pipeline.set_concurrent(false);
  const auto t1 = clock::now();
  std::vector<PipelineResult> seq;
  for (const auto& f : frames) seq.push_back(pipeline.run(f));
  const double seq_s = std::chrono::duration<double>(clock::now() - t1).count();

  for (size_t f = 0; f < frames.size(); ++f) {
    c.require(conc[f].cloud.size() == seq[f].cloud.size(), "cloud sizes differ");
    if (conc[f].cloud.size() != seq[f].cloud.size()) continue;
    for (size_t i = 0; i < conc[f].cloud.size(); ++i) {
      if (conc[f].cloud.points[i].position != seq[f].cloud.points[i].position ||
          conc[f].cloud.points[i].intensity != seq[f].cloud.points[i].intensity) {
        c.require(false, "cloud contents differ");
        break;
      }
    }
  }
  const double speedup = seq_s / conc_s;
  std::ostringstream note;
  note.precision(3);
  note << "speedup " << speedup << "x";
  if (std::getenv("OMNI_PERF_SMOKE") != nullptr)
    c.require(speedup >= 1.5, note.str() + " below 1.5x");
  else
    c.detail << (c.detail.str().empty() ? "" : "; ") << note.str()
             << " (informational; set OMNI_PERF_SMOKE=1 to enforce)";
}

// ---------------------------------------------------------------------------
// 10. ATE metric sanity.
// ---------------------------------------------------------------------------
void criterion_ate(Check& c) {
  TrajectoryData ref;
  for (int i = 0; i < 50; ++i) {
    TrajectoryPoint pt;
    pt.t = 0.1 * i;
    pt.p = Vec3(std::cos(0.2 * i), std::sin(0.2 * i), 0.01 * i);
    pt.q = rot_z(0.2 * i);
    ref.push_back(pt);
  }
  AteOptions raw;
  raw.align_se3 = false;
  c.require(evaluate_ate(ref, ref, raw).rmse == 0.0, "identity rmse not zero");

  TrajectoryData shifted = ref;
  for (auto& pt : shifted) pt.p += Vec3(1, 0, 0);
  c.require(evaluate_ate(shifted, ref).rmse < 1e-9, "aligned offset not removed");
  c.require(evaluate_ate(shifted, ref, raw).rmse == 1.0,
            "unaligned 1 m offset rmse != 1");
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    double budget_s;
    std::function<void(Check&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {"projection round trips (1e5 samples per model)", 5.0, criterion_round_trips},
      {"projection Jacobians vs central differences", 30.0, criterion_jacobians},
      {"virtual-stereo rectification row alignment", 5.0, criterion_rectification},
      {"depth pipeline wall reconstruction", 60.0, criterion_depth},
      {"IMU preintegration vs dense integration", 10.0, criterion_preintegration},
      {"optimizer recovery on a perturbed window", 10.0, criterion_optimizer},
      {"marginalization vs closed form and batch", 30.0, criterion_marginalization},
      {"closed-loop VIO across five seeds", 300.0, criterion_vio_seeds},
      {"concurrent depth pipeline determinism", 60.0, criterion_concurrency},
      {"ATE metric sanity", 1.0, criterion_ate},
  };

  bool all_ok = true;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    criteria[i].fn(check);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criteria[i].budget_s)
      check.require(false, "over time budget (" + std::to_string(elapsed) + " s > " +
                               std::to_string(criteria[i].budget_s) + " s)");
    std::cout << (check.ok ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": "
              << criteria[i].label;
    std::cout.precision(3);
    std::cout << " (" << std::fixed << elapsed << " s)";
    std::cout.unsetf(std::ios::fixed);
    if (!check.detail.str().empty()) std::cout << " -- " << check.detail.str();
    std::cout << std::endl;
    all_ok = all_ok && check.ok;
  }
  return all_ok ? 0 : 1;
}
