#include "omni/vio/optimizer.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace omni {

namespace {

struct ActiveFeature {
  int track_id;
};

std::vector<ActiveFeature> active_features(const SlidingWindow& w) {
  std::vector<ActiveFeature> out;
  for (const auto& [id, track] : w.tracks) {
    if (!track.initialized()) continue;
    if (w.index_of(track.anchor_keyframe) < 0) continue;
    const FeatureObservation* anchor = track.anchor_observation();
    if (!anchor) continue;
    int in_window = 0;
    for (const auto& obs : track.observations)
      if (w.index_of(obs.keyframe_id) >= 0) ++in_window;
    if (in_window < 2) continue;
    out.push_back({id});
  }
  return out;
}

double huber_cost(double s, double delta) {
  return s <= delta ? 0.5 * s * s : delta * (s - 0.5 * delta);
}

double huber_weight(double s, double delta) { return s <= delta ? 1.0 : delta / s; }

// Per-keyframe tangent-space offset of `state` from `lin`:
// [dp, dtheta, dv, dba, dbg].
Eigen::Matrix<double, 15, 1> state_minus(const KeyframeState& state,
                                         const KeyframeState& lin) {
  Eigen::Matrix<double, 15, 1> d;
  d.segment<3>(0) = state.p - lin.p;
  d.segment<3>(3) = log_so3(lin.q.conjugate() * state.q);
  d.segment<3>(6) = state.v - lin.v;
  d.segment<3>(9) = state.ba - lin.ba;
  d.segment<3>(12) = state.bg - lin.bg;
  return d;
}

// Accumulates cost and, when H != nullptr, the normal equations.
double linearize(const SlidingWindow& w, const std::vector<CylindricalCamera>& cams,
                 const std::vector<ActiveFeature>& features,
                 const OptimizeOptions& opt, Eigen::MatrixXd* H, Eigen::VectorXd* g) {
  const int nk = w.size();
  const int nf = int(features.size());
  const int dim = 15 * nk + nf;
  if (H) {
    H->setZero(dim, dim);
    g->setZero(dim);
  }
  double cost = 0.0;

  // Marginalization prior.
  if (!w.prior.empty()) {
    Eigen::VectorXd r = w.prior.residual0;
    for (size_t i = 0; i < w.prior.keyframe_ids.size(); ++i) {
      const int idx = w.index_of(w.prior.keyframe_ids[i]);
      if (idx < 0) continue;
      r += w.prior.jacobian.middleCols<15>(int(15 * i)) *
           state_minus(w.keyframes[idx], w.prior.lin_points[i]);
    }
    cost += 0.5 * r.squaredNorm();
    if (H) {
      for (size_t i = 0; i < w.prior.keyframe_ids.size(); ++i) {
        const int xi = w.index_of(w.prior.keyframe_ids[i]);
        if (xi < 0) continue;
        const auto ji = w.prior.jacobian.middleCols<15>(int(15 * i));
        g->segment<15>(15 * xi) += ji.transpose() * r;
        for (size_t j = 0; j < w.prior.keyframe_ids.size(); ++j) {
          const int xj = w.index_of(w.prior.keyframe_ids[j]);
          if (xj < 0) continue;
          H->block<15, 15>(15 * xi, 15 * xj) +=
              ji.transpose() * w.prior.jacobian.middleCols<15>(int(15 * j));
        }
      }
    }
  }

  // IMU factors between consecutive keyframes.
  for (int k = 0; k + 1 < nk; ++k) {
    const ImuResidual f = imu_residual(w.preintegrations[k], w.keyframes[k],
                                       w.keyframes[k + 1], w.gravity,
                                       /*check_timestamps=*/false);
    cost += 0.5 * f.residual.squaredNorm();
    if (H) {
      g->segment<15>(15 * k) += f.jac_k.transpose() * f.residual;
      g->segment<15>(15 * (k + 1)) += f.jac_k1.transpose() * f.residual;
      H->block<15, 15>(15 * k, 15 * k) += f.jac_k.transpose() * f.jac_k;
      H->block<15, 15>(15 * (k + 1), 15 * (k + 1)) += f.jac_k1.transpose() * f.jac_k1;
      const auto cross = f.jac_k.transpose() * f.jac_k1;
      H->block<15, 15>(15 * k, 15 * (k + 1)) += cross;
      H->block<15, 15>(15 * (k + 1), 15 * k) += cross.transpose();
    }
  }

  // Visual factors with Huber weighting.
  for (int fi = 0; fi < nf; ++fi) {
    const FeatureTrack& track = w.tracks.at(features[fi].track_id);
    const FeatureObservation* anchor_obs = track.anchor_observation();
    const int ai = w.index_of(track.anchor_keyframe);
    const SE3Pose anchor_cam = w.extrinsics[anchor_obs->camera].pose();
    for (const auto& obs : track.observations) {
      if (obs.keyframe_id == track.anchor_keyframe && obs.camera == track.anchor_camera)
        continue;
      const int oi = w.index_of(obs.keyframe_id);
      if (oi < 0) continue;
      const auto res = reprojection_residual(
          anchor_obs->bearing, track.inverse_depth, obs.pixel,
          w.keyframes[ai], w.keyframes[oi], anchor_cam,
          w.extrinsics[obs.camera].pose(), cams[obs.camera], opt.reproj);
      if (!res) continue;
      const double s = res->residual.norm();
      cost += huber_cost(s, opt.reproj.huber_delta);
      if (!H) continue;
      const double sw = std::sqrt(huber_weight(s, opt.reproj.huber_delta));
      const Vec2 r = sw * res->residual;
      const Eigen::Matrix<double, 2, 6> ja = sw * res->jac_anchor;
      const Eigen::Matrix<double, 2, 6> jo = sw * res->jac_observer;
      const Vec2 jl = sw * res->jac_lambda;
      const int la = 15 * ai;
      const int lo = 15 * oi;
      const int lf = 15 * nk + fi;

      g->segment<6>(la) += ja.transpose() * r;
      g->segment<6>(lo) += jo.transpose() * r;
      (*g)(lf) += jl.dot(r);
      H->block<6, 6>(la, la) += ja.transpose() * ja;
      H->block<6, 6>(lo, lo) += jo.transpose() * jo;
      (*H)(lf, lf) += jl.dot(jl);
      H->block<6, 6>(la, lo) += ja.transpose() * jo;
      H->block<6, 6>(lo, la) += jo.transpose() * ja;
      H->block<6, 1>(la, lf) += ja.transpose() * jl;
      H->block<1, 6>(lf, la) += (ja.transpose() * jl).transpose();
      H->block<6, 1>(lo, lf) += jo.transpose() * jl;
      H->block<1, 6>(lf, lo) += (jo.transpose() * jl).transpose();
    }
  }
  return cost;
}

void apply_step(SlidingWindow& w, const std::vector<ActiveFeature>& features,
                const Eigen::VectorXd& delta) {
  const int nk = w.size();
  for (int k = 0; k < nk; ++k) {
    KeyframeState& s = w.keyframes[k];
    s.p += delta.segment<3>(15 * k);
    s.q = s.q * exp_so3(delta.segment<3>(15 * k + 3));
    s.q.normalize();
    s.v += delta.segment<3>(15 * k + 6);
    s.ba += delta.segment<3>(15 * k + 9);
    s.bg += delta.segment<3>(15 * k + 12);
  }
  for (size_t fi = 0; fi < features.size(); ++fi) {
    double& lambda = w.tracks.at(features[fi].track_id).inverse_depth;
    lambda = std::max(1e-6, lambda + delta(15 * nk + int(fi)));
  }
}

}  // namespace

double window_cost(const SlidingWindow& w, const std::vector<CylindricalCamera>& cams,
                   const OptimizeOptions& opt) {
  const auto features = active_features(w);
  return linearize(w, cams, features, opt, nullptr, nullptr);
}

OptimizeReport optimize_window(SlidingWindow& w,
                               const std::vector<CylindricalCamera>& cams,
                               const OptimizeOptions& opt) {
  OptimizeReport report;
  const auto features = active_features(w);
  const int nk = w.size();
  const int dim = 15 * nk + int(features.size());
  const bool fix_first = w.prior.empty();

  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  double cost = linearize(w, cams, features, opt, &H, &g);
  report.initial_cost = cost;

  double damping = opt.init_damping;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    report.iterations = iter + 1;

    Eigen::MatrixXd A = H;
    Eigen::VectorXd b = -g;
    if (fix_first) {
      for (int i = 0; i < 6; ++i) {
        A.row(i).setZero();
        A.col(i).setZero();
        A(i, i) = 1.0;
        b(i) = 0.0;
      }
    } else {
      // The prior carries no information along the global gauge directions
      // (translation and rotation about gravity); pin them at the first
      // keyframe so the window cannot wander along the nullspace.
      const double gauge_weight = 1e8 * std::max(1.0, H.diagonal().maxCoeff());
      A.block<3, 3>(0, 0) += gauge_weight * Mat3::Identity();
      const Vec3 g_dir = w.gravity.normalized();
      const Vec3 yaw_axis = w.keyframes.front().q.conjugate() * g_dir;
      A.block<3, 3>(3, 3) += gauge_weight * (yaw_axis * yaw_axis.transpose());
    }

    bool accepted = false;
    while (true) {
      Eigen::MatrixXd Ad = A;
      for (int i = 0; i < dim; ++i)
        Ad(i, i) += damping * std::max(std::abs(A(i, i)), 1e-6);
      const Eigen::VectorXd delta = Ad.ldlt().solve(b);

      SlidingWindow candidate = w;
      apply_step(candidate, features, delta);
      const double new_cost = linearize(candidate, cams, features, opt, nullptr, nullptr);

      if (new_cost <= cost) {
        w = std::move(candidate);
        const double decrease = cost - new_cost;
        cost = new_cost;
        report.accepted_steps += 1;
        report.final_step_norm = delta.norm();
        damping = std::max(damping * 0.3, 1e-12);
        accepted = true;
        if (report.final_step_norm < opt.step_tol ||
            decrease < opt.cost_rel_tol * std::max(cost, 1e-12)) {
          report.converged = true;
        }
        break;
      }
      damping *= 10.0;
      if (damping > opt.max_damping) break;
    }

    if (!accepted) {
      if (report.accepted_steps == 0)
        throw SolverDiverged("optimize_window: no decreasing step at max damping");
      report.converged = true;  // stuck at a (numerical) minimum
      break;
    }
    if (report.converged) break;
    cost = linearize(w, cams, features, opt, &H, &g);
  }

  report.final_cost = cost;
  return report;
}

}  // namespace omni
