#include "omni/vio/marginalization.hpp"

#include <Eigen/Eigenvalues>

namespace omni {

namespace {

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

}  // namespace

void info_to_sqrt(const Eigen::MatrixXd& H, const Eigen::VectorXd& b,
                  Eigen::MatrixXd* J, Eigen::VectorXd* r0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
  const double eps = 1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<int> kept;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > eps) kept.push_back(i);

  J->resize(int(kept.size()), H.cols());
  r0->resize(int(kept.size()));
  for (size_t k = 0; k < kept.size(); ++k) {
    const double s = es.eigenvalues()(kept[k]);
    const Eigen::VectorXd u = es.eigenvectors().col(kept[k]);
    J->row(int(k)) = std::sqrt(s) * u.transpose();
    (*r0)(int(k)) = u.dot(b) / std::sqrt(s);
  }
}

void marginalize_oldest(SlidingWindow& w, const std::vector<CylindricalCamera>& cams,
                        const OptimizeOptions& opt) {
  const int nk = w.size();
  if (nk == 0) return;
  const int old_id = w.keyframe_ids.front();

  // Features anchored at the keyframe being removed.
  std::vector<int> anchored;
  for (const auto& [id, track] : w.tracks)
    if (track.anchor_keyframe == old_id && track.initialized() &&
        track.anchor_observation())
      anchored.push_back(id);

  // Variable layout: [kf0 | anchored lambdas | retained keyframes].
  const int nf0 = int(anchored.size());
  const int marg_dim = 15 + nf0;
  const int dim = marg_dim + 15 * (nk - 1);
  auto kf_offset = [&](int window_index) {
    return window_index == 0 ? 0 : marg_dim + 15 * (window_index - 1);
  };

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  bool any_factor = false;

  // Existing prior.
  if (!w.prior.empty()) {
    Eigen::VectorXd r = w.prior.residual0;
    std::vector<int> offs(w.prior.keyframe_ids.size(), -1);
    for (size_t i = 0; i < w.prior.keyframe_ids.size(); ++i) {
      const int idx = w.index_of(w.prior.keyframe_ids[i]);
      if (idx < 0) continue;
      offs[i] = kf_offset(idx);
      r += w.prior.jacobian.middleCols<15>(int(15 * i)) *
           state_minus(w.keyframes[idx], w.prior.lin_points[i]);
    }
    for (size_t i = 0; i < offs.size(); ++i) {
      if (offs[i] < 0) continue;
      const auto ji = w.prior.jacobian.middleCols<15>(int(15 * i));
      b.segment<15>(offs[i]) += ji.transpose() * r;
      for (size_t j = 0; j < offs.size(); ++j) {
        if (offs[j] < 0) continue;
        H.block<15, 15>(offs[i], offs[j]) +=
            ji.transpose() * w.prior.jacobian.middleCols<15>(int(15 * j));
      }
    }
    any_factor = true;
  }

  // IMU factor between the removed keyframe and its successor.
  if (nk >= 2 && !w.preintegrations.empty()) {
    const ImuResidual f = imu_residual(w.preintegrations.front(), w.keyframes[0],
                                       w.keyframes[1], w.gravity, false);
    const int o0 = kf_offset(0);
    const int o1 = kf_offset(1);
    b.segment<15>(o0) += f.jac_k.transpose() * f.residual;
    b.segment<15>(o1) += f.jac_k1.transpose() * f.residual;
    H.block<15, 15>(o0, o0) += f.jac_k.transpose() * f.jac_k;
    H.block<15, 15>(o1, o1) += f.jac_k1.transpose() * f.jac_k1;
    const auto cross = f.jac_k.transpose() * f.jac_k1;
    H.block<15, 15>(o0, o1) += cross;
    H.block<15, 15>(o1, o0) += cross.transpose();
    any_factor = true;
  }

  // Projection factors of the anchored features. Folding these into the
  // prior and also re-anchoring the features would count the same pixel
  // measurements twice (every residual of an anchored track chains through
  // the anchor pose), so only tracks that die with this keyframe contribute.
  std::vector<char> include_projections(nf0, 0);
  for (int fi = 0; fi < nf0; ++fi) {
    const FeatureTrack& track = w.tracks.at(anchored[fi]);
    int remaining = 0;
    for (const auto& obs : track.observations)
      if (w.index_of(obs.keyframe_id) > 0) ++remaining;
    include_projections[fi] = remaining < 2 ? 1 : 0;
  }
  for (int fi = 0; fi < nf0; ++fi) {
    if (!include_projections[fi]) continue;
    const FeatureTrack& track = w.tracks.at(anchored[fi]);
    const FeatureObservation* anchor_obs = track.anchor_observation();
    const SE3Pose anchor_cam = w.extrinsics[anchor_obs->camera].pose();
    const int lf = 15 + fi;
    for (const auto& obs : track.observations) {
      if (obs.keyframe_id == track.anchor_keyframe && obs.camera == track.anchor_camera)
        continue;
      const int oi = w.index_of(obs.keyframe_id);
      if (oi < 0) continue;
      const auto res = reprojection_residual(
          anchor_obs->bearing, track.inverse_depth, obs.pixel, w.keyframes[0],
          w.keyframes[oi], anchor_cam, w.extrinsics[obs.camera].pose(),
          cams[obs.camera], opt.reproj);
      if (!res) continue;
      const double s = res->residual.norm();
      const double sw = s <= opt.reproj.huber_delta
                            ? 1.0
                            : std::sqrt(opt.reproj.huber_delta / s);
      const Vec2 r = sw * res->residual;
      const Eigen::Matrix<double, 2, 6> ja = sw * res->jac_anchor;
      const Eigen::Matrix<double, 2, 6> jo = sw * res->jac_observer;
      const Vec2 jl = sw * res->jac_lambda;
      const int la = kf_offset(0);
      const int lo = kf_offset(oi);

      b.segment<6>(la) += ja.transpose() * r;
      b.segment<6>(lo) += jo.transpose() * r;
      b(lf) += jl.dot(r);
      H.block<6, 6>(la, la) += ja.transpose() * ja;
      H.block<6, 6>(lo, lo) += jo.transpose() * jo;
      H(lf, lf) += jl.dot(jl);
      H.block<6, 6>(la, lo) += ja.transpose() * jo;
      H.block<6, 6>(lo, la) += jo.transpose() * ja;
      H.block<6, 1>(la, lf) += ja.transpose() * jl;
      H.block<1, 6>(lf, la) += (ja.transpose() * jl).transpose();
      H.block<6, 1>(lo, lf) += jo.transpose() * jl;
      H.block<1, 6>(lf, lo) += (jo.transpose() * jl).transpose();
      any_factor = true;
    }
  }

  if (any_factor && nk >= 2) {
    // Schur complement onto the retained keyframes.
    const auto H_mm = H.topLeftCorner(marg_dim, marg_dim);
    const auto H_mr = H.topRightCorner(marg_dim, dim - marg_dim);
    const auto H_rr = H.bottomRightCorner(dim - marg_dim, dim - marg_dim);
    const auto b_m = b.head(marg_dim);
    const auto b_r = b.tail(dim - marg_dim);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        0.5 * (H_mm + H_mm.transpose()));
    const double eps = 1e-9 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    Eigen::VectorXd inv = es.eigenvalues();
    for (int i = 0; i < inv.size(); ++i) inv(i) = inv(i) > eps ? 1.0 / inv(i) : 0.0;
    const Eigen::MatrixXd H_mm_inv =
        es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();

    const Eigen::MatrixXd H_star = H_rr - H_mr.transpose() * H_mm_inv * H_mr;
    const Eigen::VectorXd b_star = b_r - H_mr.transpose() * H_mm_inv * b_m;

    MarginalizationPrior prior;
    for (int k = 1; k < nk; ++k) {
      prior.keyframe_ids.push_back(w.keyframe_ids[k]);
      prior.lin_points.push_back(w.keyframes[k]);
    }
    info_to_sqrt(H_star, b_star, &prior.jacobian, &prior.residual0);
    w.prior = std::move(prior);
  }
  // With no information touching the keyframe, the prior is left as-is.

  // Re-anchor or drop features anchored at the removed keyframe.
  for (int id : anchored) {
    FeatureTrack& track = w.tracks.at(id);
    const FeatureObservation* anchor_obs = track.anchor_observation();
    const KeyframeState& kf0 = w.keyframes[0];
    const SE3Pose cam0 = w.extrinsics[track.anchor_camera].pose();
    const Vec3 x_c0 = anchor_obs->bearing / track.inverse_depth;
    const Vec3 x_w = kf0.q * cam0.act(x_c0) + kf0.p;

    std::erase_if(track.observations,
                  [&](const FeatureObservation& o) { return o.keyframe_id == old_id; });
    const FeatureObservation* next = nullptr;
    for (const auto& obs : track.observations)
      if (w.index_of(obs.keyframe_id) > 0) {
        next = &obs;
        break;
      }
    if (!next || track.observations.size() < 2) {
      w.tracks.erase(id);
      continue;
    }
    const int ni = w.index_of(next->keyframe_id);
    const SE3Pose cam_n = w.extrinsics[next->camera].pose();
    const Vec3 x_cn = cam_n.rotation.conjugate() *
                      (w.keyframes[ni].q.conjugate() * (x_w - w.keyframes[ni].p) -
                       cam_n.translation);
    const double range = x_cn.norm();
    if (range < 1e-6 || next->bearing.dot(x_cn) <= 0.0) {
      w.tracks.erase(id);
      continue;
    }
    track.anchor_keyframe = next->keyframe_id;
    track.anchor_camera = next->camera;
    track.inverse_depth = 1.0 / range;
  }

  // Drop remaining references to the removed keyframe.
  for (auto it = w.tracks.begin(); it != w.tracks.end();) {
    FeatureTrack& track = it->second;
    std::erase_if(track.observations,
                  [&](const FeatureObservation& o) { return o.keyframe_id == old_id; });
    if (track.observations.empty())
      it = w.tracks.erase(it);
    else
      ++it;
  }

  w.keyframes.pop_front();
  w.keyframe_ids.pop_front();
  if (!w.preintegrations.empty()) w.preintegrations.pop_front();
}

}  // namespace omni
