#include "omni/vio/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "omni/vio/optimizer.hpp"

namespace omni {

namespace {

// Midpoint integration of raw samples from `state` up to t_end.
KeyframeState integrate_samples(const KeyframeState& state,
                                const std::vector<ImuSample>& samples,
                                const Vec3& gravity, double t_end) {
  KeyframeState s = state;
  for (size_t i = 0; i + 1 < samples.size(); ++i) {
    if (samples[i].timestamp >= t_end - 1e-9) break;
    const ImuSample& a = samples[i];
    const ImuSample& b = samples[i + 1];
    const double t1 = std::min(b.timestamp, t_end);
    const double dt = t1 - a.timestamp;
    if (dt <= 0.0) continue;

    const Vec3 gyro_mid = 0.5 * (a.gyro + b.gyro) - s.bg;
    const Quat q1 = (s.q * exp_so3(gyro_mid * dt)).normalized();
    const Vec3 acc0 = s.q * (a.accel - s.ba) + gravity;
    const Vec3 acc1 = q1 * (b.accel - s.ba) + gravity;
    const Vec3 acc_mid = 0.5 * (acc0 + acc1);
    s.p += s.v * dt + 0.5 * acc_mid * dt * dt;
    s.v += acc_mid * dt;
    s.q = q1;
  }
  s.timestamp = t_end;
  return s;
}

}  // namespace

std::optional<Vec2> cross_camera_track(
    const Vec2& source_pixel, double depth_guess, const ImagePyramid& source_pyr,
    const ImagePyramid& target_pyr, const CylindricalCamera& source_model,
    const CylindricalCamera& target_model, const SE3Pose& target_from_source,
    const TrackParams& params) {
  const Vec3 x_s = depth_guess * source_model.unproject(source_pixel);
  const Vec3 x_t = target_from_source.act(x_s);
  const auto seed = target_model.project(x_t);
  if (!seed || !target_model.in_image(*seed)) return std::nullopt;

  std::vector<Vec2> pts{source_pixel}, seeds{*seed}, refined;
  std::vector<uint8_t> status;
  lk_track(source_pyr, target_pyr, pts, &seeds, &refined, &status, params);
  if (!status[0]) return std::nullopt;

  std::vector<Vec2> back;
  std::vector<uint8_t> back_status;
  lk_track(target_pyr, source_pyr, refined, &pts, &back, &back_status, params);
  if (!back_status[0] || (back[0] - source_pixel).norm() > params.reverse_threshold)
    return std::nullopt;
  if (!target_model.in_image(refined[0])) return std::nullopt;
  return refined[0];
}

VioEstimator::VioEstimator(const RigConfig& config, bool two_cameras_only)
    : cfg_(config) {
  active_cams_ = two_cameras_only ? std::vector<int>{0, 1}
                                  : std::vector<int>{0, 1, 2, 3};
  for (int c = 0; c < 4; ++c) {
    CylindricalCamera cyl = CylindricalCamera::with_fov(
        cfg_.vio.tracking_fov_deg, cfg_.vio.tracking_width, cfg_.vio.tracking_height);
    cyl_models_.push_back(cyl);
    cyl_tables_[c] =
        build_remap_table(cfg_.rig.cameras[c].camera, cyl, Quat::Identity());
    CameraExtrinsic ext;
    ext.q = cfg_.rig.cameras[c].body_from_camera.rotation;
    ext.p = cfg_.rig.cameras[c].body_from_camera.translation;
    window_.extrinsics.push_back(ext);
  }
  detect_params_.max_features = cfg_.vio.max_features;
  opt_options_.reproj.pixel_sigma = cfg_.vio.pixel_sigma;
  opt_options_.reproj.huber_delta = cfg_.vio.huber_delta;
  opt_options_.noise = cfg_.imu_noise;
}

void VioEstimator::push_imu(const ImuSample& sample) {
  if (!initialized_)
    init_buffer_.push_back(sample);
  else
    imu_interval_.push_back(sample);
}

void VioEstimator::initialize(double t) {
  std::vector<const ImuSample*> window;
  for (const ImuSample& s : init_buffer_)
    if (s.timestamp <= t + 1e-9) window.push_back(&s);
  if (window.size() < 10)
    throw InitializationFailed("static interval too short: " +
                               std::to_string(window.size()) + " IMU samples");

  Vec3 mean_acc = Vec3::Zero(), mean_gyro = Vec3::Zero();
  for (const ImuSample* s : window) {
    mean_acc += s->accel;
    mean_gyro += s->gyro;
  }
  mean_acc /= double(window.size());
  mean_gyro /= double(window.size());

  double max_acc_dev = 0.0, max_gyro_dev = 0.0;
  for (const ImuSample* s : window) {
    max_acc_dev = std::max(max_acc_dev, (s->accel - mean_acc).norm());
    max_gyro_dev = std::max(max_gyro_dev, (s->gyro - mean_gyro).norm());
  }
  if (max_acc_dev > 1.0 || max_gyro_dev > 0.2)
    throw InitializationFailed("excessive motion during the declared static interval");
  if (mean_acc.norm() < 1.0)
    throw InitializationFailed("accelerometer magnitude implausibly small");

  // World frame = initial body frame; gravity points opposite the measured
  // specific force at rest.
  window_.gravity = -cfg_.imu_noise.gravity * mean_acc.normalized();

  KeyframeState kf;
  kf.timestamp = t;
  kf.bg = mean_gyro;
  kf.ba = mean_acc + window_.gravity;  // magnitude residual along gravity
  window_.keyframes.push_back(kf);
  window_.keyframe_ids.push_back(next_keyframe_id_);
  last_keyframe_time_ = t;

  for (int c : active_cams_) {
    const Image& img = cur_pyr_[c].levels[0];
    const auto corners = detect_features(img, {}, detect_params_);
    for (const Vec2& px : corners) {
      ActiveTrack at;
      at.id = next_track_id_++;
      at.pixel = px;
      at.kf_pixel = px;
      active_[c].push_back(at);

      FeatureTrack track;
      track.id = at.id;
      track.anchor_keyframe = next_keyframe_id_;
      track.anchor_camera = c;
      FeatureObservation obs;
      obs.keyframe_id = next_keyframe_id_;
      obs.camera = c;
      obs.pixel = px;
      obs.bearing = cyl_models_[c].unproject(px);
      track.observations.push_back(obs);
      window_.tracks.emplace(at.id, std::move(track));
    }
  }
  ++next_keyframe_id_;
  stats_.keyframes = 1;

  // Keep IMU samples from the first keyframe on for the next interval.
  for (const ImuSample& s : init_buffer_)
    if (s.timestamp >= t - 1e-9) imu_interval_.push_back(s);
  init_buffer_.clear();
  initialized_ = true;
}

KeyframeState VioEstimator::propagate_to(double t) const {
  return integrate_samples(window_.keyframes.back(), imu_interval_, window_.gravity, t);
}

void VioEstimator::detect_new_features(int cam, int keyframe_id) {
  std::vector<Vec2> existing;
  for (const ActiveTrack& at : active_[cam]) existing.push_back(at.pixel);
  DetectParams params = detect_params_;
  params.max_features = cfg_.vio.max_features - int(existing.size());
  if (params.max_features <= 0) return;

  const auto corners = detect_features(cur_pyr_[cam].levels[0], existing, params);
  for (const Vec2& px : corners) {
    ActiveTrack at;
    at.id = next_track_id_++;
    at.pixel = px;
    at.kf_pixel = px;
    active_[cam].push_back(at);

    FeatureTrack track;
    track.id = at.id;
    track.anchor_keyframe = keyframe_id;
    track.anchor_camera = cam;
    FeatureObservation obs;
    obs.keyframe_id = keyframe_id;
    obs.camera = cam;
    obs.pixel = px;
    obs.bearing = cyl_models_[cam].unproject(px);
    track.observations.push_back(obs);
    window_.tracks.emplace(at.id, std::move(track));
  }
}

void VioEstimator::handoff_cross_camera(int keyframe_id) {
  const KeyframeState& kf = window_.keyframes.back();
  for (int c : active_cams_) {
    for (const ActiveTrack& at : active_[c]) {
      auto it = window_.tracks.find(at.id);
      if (it == window_.tracks.end()) continue;
      FeatureTrack& track = it->second;

      double depth_guess = 3.0;  // mid-range seed for uninitialized features
      if (track.initialized()) {
        // Transport the anchor depth into camera c at the current keyframe.
        const FeatureObservation* anchor = track.anchor_observation();
        const int ai = window_.index_of(track.anchor_keyframe);
        if (anchor && ai >= 0) {
          const KeyframeState& akf = window_.keyframes[ai];
          const SE3Pose cam_a = window_.extrinsics[track.anchor_camera].pose();
          const Vec3 x_w =
              akf.q * cam_a.act(anchor->bearing / track.inverse_depth) + akf.p;
          const SE3Pose cam_c = window_.extrinsics[c].pose();
          const Vec3 x_c =
              cam_c.rotation.conjugate() * (kf.q.conjugate() * (x_w - kf.p) - cam_c.translation);
          if (x_c.norm() > 0.1) depth_guess = x_c.norm();
        }
      }

      for (int neighbor : active_cams_) {
        if (neighbor == c) continue;
        // Only adjacent views share enough field of view.
        if (active_cams_.size() == 4 && (std::abs(neighbor - c) % 2) == 0) continue;
        if (track.find(keyframe_id, neighbor)) continue;
        bool already_active = false;
        for (const ActiveTrack& other : active_[neighbor])
          if (other.id == at.id) {
            already_active = true;
            break;
          }
        if (already_active) continue;

        const SE3Pose target_from_source =
            window_.extrinsics[neighbor].pose().inverse() *
            window_.extrinsics[c].pose();
        const auto refined = cross_camera_track(
            at.pixel, depth_guess, cur_pyr_[c], cur_pyr_[neighbor], cyl_models_[c],
            cyl_models_[neighbor], target_from_source, track_params_);
        if (!refined) continue;

        FeatureObservation obs;
        obs.keyframe_id = keyframe_id;
        obs.camera = neighbor;
        obs.pixel = *refined;
        obs.bearing = cyl_models_[neighbor].unproject(*refined);
        track.observations.push_back(obs);

        ActiveTrack nt;
        nt.id = at.id;
        nt.pixel = *refined;
        nt.kf_pixel = *refined;
        active_[neighbor].push_back(nt);
      }
    }
  }
}

void VioEstimator::triangulate_pending() {
  std::vector<int> to_drop;
  for (auto& [id, track] : window_.tracks) {
    if (track.initialized()) continue;
    double lambda = 0.0;
    const TriangulationStatus st = triangulate_feature(track, window_, &lambda);
    if (st == TriangulationStatus::Ok)
      track.inverse_depth = lambda;
    else if (st == TriangulationStatus::NegativeDepth)
      to_drop.push_back(id);
  }
  for (int id : to_drop) {
    window_.tracks.erase(id);
    for (int c = 0; c < 4; ++c)
      std::erase_if(active_[c],
                    [id](const ActiveTrack& at) { return at.id == id; });
  }
}

void VioEstimator::make_keyframe(double t) {
  const int kf_id = next_keyframe_id_++;

  // Split the IMU interval at the keyframe time.
  std::vector<ImuSample> for_interval, remaining;
  for (const ImuSample& s : imu_interval_) {
    if (s.timestamp <= t + 1e-9) for_interval.push_back(s);
    if (s.timestamp >= t - 1e-9) remaining.push_back(s);
  }

  KeyframeState kf = integrate_samples(window_.keyframes.back(), for_interval,
                                       window_.gravity, t);
  const KeyframeState& prev = window_.keyframes.back();
  window_.preintegrations.push_back(
      preintegrate(for_interval, prev.ba, prev.bg, cfg_.imu_noise));
  window_.keyframes.push_back(kf);
  window_.keyframe_ids.push_back(kf_id);
  imu_interval_ = std::move(remaining);
  last_keyframe_time_ = t;
  ++stats_.keyframes;

  // Record tracked observations.
  int tracked_total = 0;
  for (int c : active_cams_) {
    tracked_total += int(active_[c].size());
    for (ActiveTrack& at : active_[c]) {
      auto it = window_.tracks.find(at.id);
      if (it == window_.tracks.end()) continue;
      FeatureObservation obs;
      obs.keyframe_id = kf_id;
      obs.camera = c;
      obs.pixel = at.pixel;
      obs.bearing = cyl_models_[c].unproject(at.pixel);
      it->second.observations.push_back(obs);
      at.kf_pixel = at.pixel;
    }
  }
  if (tracked_total < 8) ++stats_.tracking_lost_events;

  triangulate_pending();
  handoff_cross_camera(kf_id);
  for (int c : active_cams_) detect_new_features(c, kf_id);
  triangulate_pending();

  if (window_.size() >= 2) {
    try {
      optimize_window(window_, cyl_models_, opt_options_);
    } catch (const SolverDiverged&) {
      ++stats_.solver_failures;
    }
  }
  if (window_.size() > cfg_.vio.window + 1)
    marginalize_oldest(window_, cyl_models_, opt_options_);

  // Drop active tracks the window no longer knows about.
  for (int c = 0; c < 4; ++c)
    std::erase_if(active_[c], [this](const ActiveTrack& at) {
      return window_.tracks.find(at.id) == window_.tracks.end();
    });
}

SE3Pose VioEstimator::push_frame(double t, const std::array<Image, 4>& fisheye) {
  ++stats_.frames;
  for (int c : active_cams_) {
    const Image cyl = apply_remap(cyl_tables_[c], fisheye[c]);
    cur_pyr_[c] = ImagePyramid::build(cyl, track_params_.pyramid_levels);
  }

  if (!initialized_) {
    SE3Pose pose = SE3Pose::identity();
    const double first_t =
        init_buffer_.empty() ? t : init_buffer_.front().timestamp;
    if (t - first_t >= cfg_.vio.static_init_time) initialize(t);
    for (int c : active_cams_) prev_pyr_[c] = cur_pyr_[c];
    has_prev_ = true;
    trajectory_.push_back({t, pose.translation, pose.rotation});
    return pose;
  }

  // Frame-to-frame tracking per camera.
  int tracked_total = 0;
  double parallax_sum = 0.0;
  int parallax_count = 0;
  for (int c : active_cams_) {
    std::vector<Vec2> prev_pts, next_pts;
    std::vector<uint8_t> status;
    for (const ActiveTrack& at : active_[c]) prev_pts.push_back(at.pixel);
    if (!prev_pts.empty()) {
      lk_track(prev_pyr_[c], cur_pyr_[c], prev_pts, nullptr, &next_pts, &status,
               track_params_);
      std::vector<Vec2> back;
      std::vector<uint8_t> back_status;
      lk_track(cur_pyr_[c], prev_pyr_[c], next_pts, nullptr, &back, &back_status,
               track_params_);
      std::vector<ActiveTrack> kept;
      for (size_t i = 0; i < prev_pts.size(); ++i) {
        if (!status[i] || !back_status[i] ||
            (back[i] - prev_pts[i]).norm() > track_params_.reverse_threshold)
          continue;
        if (!cyl_models_[c].in_image(next_pts[i])) continue;
        ActiveTrack at = active_[c][i];
        at.pixel = next_pts[i];
        kept.push_back(at);
        parallax_sum += (at.pixel - at.kf_pixel).norm();
        ++parallax_count;
      }
      active_[c] = std::move(kept);
    }
    tracked_total += int(active_[c].size());
  }

  const double mean_parallax =
      parallax_count > 0 ? parallax_sum / parallax_count : 0.0;
  const bool promote = mean_parallax > cfg_.vio.parallax_px ||
                       tracked_total < cfg_.vio.min_tracked ||
                       t - last_keyframe_time_ >= cfg_.vio.keyframe_dt - 1e-9;

  SE3Pose pose;
  if (promote) {
    make_keyframe(t);
    const KeyframeState& kf = window_.keyframes.back();
    pose = SE3Pose{kf.q, kf.p};
  } else {
    const KeyframeState s = propagate_to(t);
    pose = SE3Pose{s.q, s.p};
  }

  for (int c : active_cams_) prev_pyr_[c] = cur_pyr_[c];
  has_prev_ = true;
  trajectory_.push_back({t, pose.translation, pose.rotation});
  return pose;
}

TrajectoryData run_vio(const RigConfig& config, const std::vector<double>& frame_times,
                       const std::function<std::array<Image, 4>(int)>& load_frame,
                       const std::vector<ImuSample>& imu, bool two_cameras_only,
                       VioStats* stats) {
  VioEstimator est(config, two_cameras_only);
  size_t imu_idx = 0;
  for (size_t f = 0; f < frame_times.size(); ++f) {
    const double t = frame_times[f];
    while (imu_idx < imu.size() && imu[imu_idx].timestamp <= t + 1e-9)
      est.push_imu(imu[imu_idx++]);
    est.push_frame(t, load_frame(int(f)));
  }
  if (stats) *stats = est.stats();
  return est.trajectory();
}

}  // namespace omni
