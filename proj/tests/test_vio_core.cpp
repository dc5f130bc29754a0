#include <doctest.h>

#include <cmath>
#include <random>

#include "synthetic_window.hpp"

using namespace omni;
using omni::testing::SyntheticWorld;

namespace {

CylindricalCamera tracking_camera() {
  return CylindricalCamera::with_fov(190.0, 400, 160);
}

// Minimal two-keyframe window with identity extrinsics for the trivial
// triangulation examples.
SlidingWindow two_view_window(const Vec3& p0, const Vec3& p1) {
  SlidingWindow w;
  w.extrinsics.resize(1);
  KeyframeState a, b;
  a.p = p0;
  b.p = p1;
  w.keyframes = {a, b};
  w.keyframe_ids = {0, 1};
  return w;
}

FeatureObservation make_obs(int kf, int cam, const Vec3& bearing) {
  FeatureObservation o;
  o.keyframe_id = kf;
  o.camera = cam;
  o.bearing = bearing.normalized();
  const auto uv = tracking_camera().project(o.bearing);
  if (uv) o.pixel = *uv;
  return o;
}

}  // namespace

TEST_CASE("triangulation: lateral 0.2 m baseline on a 4 m landmark") {
  SlidingWindow w = two_view_window(Vec3::Zero(), Vec3(0.2, 0, 0));
  const Vec3 landmark(0, 0, 4);
  FeatureTrack track;
  track.id = 0;
  track.anchor_keyframe = 0;
  track.anchor_camera = 0;
  track.observations.push_back(make_obs(0, 0, landmark));
  track.observations.push_back(make_obs(1, 0, landmark - Vec3(0.2, 0, 0)));
  double lambda = 0.0;
  REQUIRE(triangulate_feature(track, w, &lambda) == TriangulationStatus::Ok);
  CHECK(std::abs(lambda - 0.25) < 1e-6);
}

TEST_CASE("triangulation: identical poses have insufficient parallax") {
  SlidingWindow w = two_view_window(Vec3::Zero(), Vec3::Zero());
  const Vec3 landmark(0, 0, 4);
  FeatureTrack track;
  track.id = 0;
  track.anchor_keyframe = 0;
  track.anchor_camera = 0;
  track.observations.push_back(make_obs(0, 0, landmark));
  track.observations.push_back(make_obs(1, 0, landmark));
  double lambda = 0.0;
  CHECK(triangulate_feature(track, w, &lambda) ==
        TriangulationStatus::InsufficientParallax);
}

TEST_CASE("triangulation: landmark behind the anchor camera") {
  SlidingWindow w = two_view_window(Vec3::Zero(), Vec3(0.2, 0, 0));
  // Diverging rays whose midpoint solution lies behind the cameras: the
  // anchor looks along +z from the origin while the second ray from
  // (0.2, 0, 0) tilts away, so the best intersection has z < 0.
  FeatureTrack track;
  track.id = 0;
  track.anchor_keyframe = 0;
  track.anchor_camera = 0;
  FeatureObservation a = make_obs(0, 0, Vec3(0, 0, 1));
  FeatureObservation b = make_obs(1, 0, Vec3(0.05, 0, 1));
  track.observations = {a, b};
  double lambda = 0.0;
  CHECK(triangulate_feature(track, w, &lambda) == TriangulationStatus::NegativeDepth);
}

TEST_CASE("reprojection residual: zero at the oracle observation") {
  const SyntheticWorld world;
  const SlidingWindow w = world.build_window({1.0, 1.4, 1.8});
  REQUIRE(!w.tracks.empty());
  int checked = 0;
  for (const auto& [id, track] : w.tracks) {
    const FeatureObservation* anchor = track.anchor_observation();
    const int ai = w.index_of(track.anchor_keyframe);
    for (const auto& obs : track.observations) {
      if (&obs == anchor) continue;
      const int oi = w.index_of(obs.keyframe_id);
      const auto res = reprojection_residual(
          anchor->bearing, track.inverse_depth, obs.pixel, w.keyframes[ai],
          w.keyframes[oi], w.extrinsics[size_t(track.anchor_camera)].pose(),
          w.extrinsics[size_t(obs.camera)].pose(),
          world.cyl_models[size_t(obs.camera)]);
      REQUIRE(res.has_value());
      CHECK(res->residual.norm() < 1e-9);
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("reprojection residual: Jacobians match central differences") {
  const SyntheticWorld world;
  SlidingWindow w = world.build_window({1.0, 1.5});
  std::mt19937 rng(67);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  const ReprojectionParams params;
  int checked = 0;
  for (const auto& [id, track] : w.tracks) {
    if (checked >= 120) break;
    const FeatureObservation* anchor = track.anchor_observation();
    const int ai = w.index_of(track.anchor_keyframe);
    for (const auto& obs : track.observations) {
      if (&obs == anchor) continue;
      const int oi = w.index_of(obs.keyframe_id);
      if (oi == ai) continue;
      // Randomly perturbed states so the residual is nonzero.
      KeyframeState ka = w.keyframes[ai];
      KeyframeState ko = w.keyframes[oi];
      ka.p += Vec3(u(rng), u(rng), u(rng));
      ka.q = ka.q * exp_so3(Vec3(u(rng), u(rng), u(rng)));
      ko.p += Vec3(u(rng), u(rng), u(rng));
      ko.q = ko.q * exp_so3(Vec3(u(rng), u(rng), u(rng)));
      const double lambda = track.inverse_depth * (1.0 + u(rng));
      const SE3Pose cam_a = w.extrinsics[size_t(track.anchor_camera)].pose();
      const SE3Pose cam_o = w.extrinsics[size_t(obs.camera)].pose();
      const auto& model = world.cyl_models[size_t(obs.camera)];
      const auto res = reprojection_residual(anchor->bearing, lambda, obs.pixel, ka, ko,
                                             cam_a, cam_o, model, params);
      if (!res) continue;

      const double h = 1e-6;
      auto eval = [&](const KeyframeState& a, const KeyframeState& o, double l) {
        const auto r = reprojection_residual(anchor->bearing, l, obs.pixel, a, o,
                                             cam_a, cam_o, model, params);
        REQUIRE(r.has_value());
        return r->residual;
      };
      for (int i = 0; i < 6; ++i) {
        for (int which = 0; which < 2; ++which) {
          auto perturb = [&](double eps) {
            KeyframeState a = ka, o = ko;
            KeyframeState& s = which == 0 ? a : o;
            Vec3 d = Vec3::Zero();
            d(i % 3) = eps;
            if (i < 3)
              s.p += d;
            else
              s.q = s.q * exp_so3(d);
            return eval(a, o, lambda);
          };
          const Vec2 fd = (perturb(h) - perturb(-h)) / (2.0 * h);
          const auto& jac = which == 0 ? res->jac_anchor : res->jac_observer;
          const double scale = std::max(1.0, fd.norm());
          CHECK((jac.col(i) - fd).norm() / scale < 1e-5);
        }
      }
      const Vec2 fd_l =
          (eval(ka, ko, lambda + h) - eval(ka, ko, lambda - h)) / (2.0 * h);
      CHECK((res->jac_lambda - fd_l).norm() / std::max(1.0, fd_l.norm()) < 1e-5);
      ++checked;
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("reprojection residual: feature behind the observer fails") {
  const SyntheticWorld world;
  SlidingWindow w = world.build_window({1.0, 1.5});
  const auto& [id, track] = *w.tracks.begin();
  const FeatureObservation* anchor = track.anchor_observation();
  const int ai = w.index_of(track.anchor_keyframe);
  // An observer turned 180 degrees away from the feature.
  KeyframeState away = w.keyframes[ai];
  const SE3Pose cam = w.extrinsics[size_t(track.anchor_camera)].pose();
  away.p += away.q * (cam.rotation * anchor->bearing) * (2.0 / track.inverse_depth);
  const auto res = reprojection_residual(
      anchor->bearing, track.inverse_depth, anchor->pixel, w.keyframes[ai], away, cam,
      cam, world.cyl_models[size_t(track.anchor_camera)]);
  CHECK(!res.has_value());
}

TEST_CASE("optimizer: perturbed noiseless window recovers the ground truth") {
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
  for (auto& [id, track] : w.tracks)
    track.inverse_depth *= 1.0 + 0.05 * u(rng);

  const OptimizeReport report = optimize_window(w, world.cyl_models);
  CHECK(report.iterations <= 15);
  CHECK(report.final_cost <= report.initial_cost);
  for (size_t i = 0; i < w.keyframes.size(); ++i) {
    CHECK((w.keyframes[i].p - truth.keyframes[i].p).norm() < 1e-4);
    CHECK(rotation_angle(w.keyframes[i].q, truth.keyframes[i].q) < 1e-4);
  }
}

TEST_CASE("optimizer: an already-optimal window converges immediately") {
  const SyntheticWorld world;
  SlidingWindow w = world.build_window({1.0, 1.4, 1.8, 2.2});
  optimize_window(w, world.cyl_models);  // settle numerically
  const OptimizeReport report = optimize_window(w, world.cyl_models);
  CHECK(report.converged);
  CHECK(report.iterations <= 2);
  CHECK((report.accepted_steps == 0 || report.final_step_norm < 1e-6));
}

TEST_CASE("optimizer: accepted steps never increase the robust cost") {
  const SyntheticWorld world;
  std::vector<double> times;
  for (int i = 0; i < 8; ++i) times.push_back(1.0 + 0.4 * i);
  SlidingWindow w = world.build_window(times);
  std::mt19937 rng(73);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (size_t i = 1; i < w.keyframes.size(); ++i) {
    w.keyframes[i].p += Vec3(u(rng), u(rng), u(rng));
    w.keyframes[i].q = w.keyframes[i].q * exp_so3(0.5 * Vec3(u(rng), u(rng), u(rng)));
  }
  const double before = window_cost(w, world.cyl_models);
  const OptimizeReport report = optimize_window(w, world.cyl_models);
  CHECK(report.initial_cost == doctest::Approx(before).epsilon(1e-9));
  CHECK(report.final_cost <= report.initial_cost);
  CHECK(window_cost(w, world.cyl_models) ==
        doctest::Approx(report.final_cost).epsilon(1e-9));
}

TEST_CASE("optimizer: a gross outlier is bounded by the robust loss") {
  const SyntheticWorld world;
  std::vector<double> times;
  for (int i = 0; i < 8; ++i) times.push_back(1.0 + 0.4 * i);

  // Both runs share modest observation noise and the same perturbed start;
  // the second run adds one 50 px outlier.
  auto run = [&](bool with_outlier) {
    SlidingWindow w = world.build_window(times);
    const SlidingWindow truth = w;
    std::mt19937 rng(79);
    std::normal_distribution<double> px(0.0, 0.5);
    for (auto& [id, track] : w.tracks)
      for (auto& obs : track.observations) obs.pixel += Vec2(px(rng), px(rng));
    if (with_outlier) {
      auto& track = w.tracks.begin()->second;
      for (auto& obs : track.observations)
        if (w.index_of(obs.keyframe_id) == 3) obs.pixel += Vec2(50.0, 0.0);
    }
    std::uniform_real_distribution<double> u(-0.02, 0.02);
    for (size_t i = 1; i < w.keyframes.size(); ++i)
      w.keyframes[i].p += Vec3(u(rng), u(rng), u(rng));
    optimize_window(w, world.cyl_models);
    double max_err = 0.0;
    for (size_t i = 0; i < w.keyframes.size(); ++i)
      max_err = std::max(max_err, (w.keyframes[i].p - truth.keyframes[i].p).norm());
    return max_err;
  };
  const double clean = run(false);
  const double dirty = run(true);
  CHECK(dirty <= 2.0 * clean);
}

TEST_CASE("marginalization: info_to_sqrt reconstructs the information system") {
  std::mt19937 rng(83);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd A(20, 12);
  Eigen::VectorXd r(20);
  for (int i = 0; i < 20; ++i) {
    r(i) = n(rng);
    for (int j = 0; j < 12; ++j) A(i, j) = n(rng);
  }
  const Eigen::MatrixXd H = A.transpose() * A;
  const Eigen::VectorXd b = A.transpose() * r;
  Eigen::MatrixXd J;
  Eigen::VectorXd r0;
  info_to_sqrt(H, b, &J, &r0);
  CHECK((J.transpose() * J - H).norm() < 1e-9 * std::max(1.0, H.norm()));
  CHECK((J.transpose() * r0 - b).norm() < 1e-9 * std::max(1.0, b.norm()));
}

TEST_CASE("marginalization: Schur complement equals the closed-form marginal") {
  // Joint Gaussian over (x_m in R^5, x_r in R^7): the information of the
  // marginal over x_r is the inverse of the corresponding covariance block.
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
  CHECK((schur - cov_rr.inverse()).norm() < 1e-10 * std::max(1.0, schur.norm()));

  // The mean is preserved too: for b = H x*, the Schur-reduced system solves
  // to the x_r block of x*.
  Eigen::VectorXd x_star(12);
  for (int i = 0; i < 12; ++i) x_star(i) = n(rng);
  const Eigen::VectorXd b = H * x_star;
  const Eigen::VectorXd b_r =
      b.tail(7) - H_mr.transpose() * H_mm.inverse() * b.head(5);
  CHECK((schur.ldlt().solve(b_r) - x_star.tail(7)).norm() < 1e-10);
}

TEST_CASE("marginalization: a lone uninformative keyframe leaves the prior alone") {
  const SyntheticWorld world;
  SlidingWindow w;
  w.extrinsics.resize(4);
  w.keyframes.push_back(KeyframeState{});
  w.keyframe_ids.push_back(0);
  marginalize_oldest(w, world.cyl_models);
  CHECK(w.prior.empty());
  CHECK(w.size() == 0);
}

TEST_CASE("marginalization: sliding window tracks the full batch solution") {
  const SyntheticWorld world(3, 14.0);
  const int total = 20;
  std::vector<double> times;
  for (int i = 0; i < total; ++i) times.push_back(1.0 + 0.3 * i);

  // Full batch: optimize all keyframes jointly.
  SlidingWindow batch = world.build_window(times);
  optimize_window(batch, world.cyl_models);

  // Sliding: grow to 11, optimize, marginalize; record each keyframe's final
  // estimate the last time it is seen.
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
    // (Re-)initialize new tracks from triangulation once they have parallax.
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
    REQUIRE(bi >= 0);
    CHECK((sliding_p[size_t(i)] - batch.keyframes[size_t(bi)].p).norm() < 1e-3);
  }
}
