#pragma once

// Builders shared by the estimation tests: a noiseless sliding window filled
// from the synthetic world (exact keyframe states, exact preintegrations and
// exact landmark observations), against which solver behavior can be checked
// in isolation from the image frontend.

#include <vector>

#include "omni/io/config.hpp"
#include "omni/synth/imu_sim.hpp"
#include "omni/synth/oracles.hpp"
#include "omni/synth/scene.hpp"
#include "omni/synth/trajectory.hpp"
#include "omni/vio/marginalization.hpp"
#include "omni/vio/optimizer.hpp"

namespace omni::testing {

struct SyntheticWorld {
  Trajectory trajectory;
  Scene scene;
  FisheyeRig rig;
  std::vector<CylindricalCamera> cyl_models;
  std::vector<ImuSample> imu;

  explicit SyntheticWorld(uint32_t seed = 1, double duration = 12.0)
      : trajectory(make_spec(duration)),
        scene(Scene::room(3.0, 2.0, seed)),
        rig(reference_config().rig) {
    for (int c = 0; c < 4; ++c)
      cyl_models.push_back(CylindricalCamera::with_fov(190.0, 400, 160));
    ImuSimOptions opts;
    opts.rate_hz = 1000.0;
    opts.zero_noise = true;
    imu = simulate_imu(trajectory, {}, opts);
  }

  static TrajectorySpec make_spec(double duration) {
    TrajectorySpec spec;
    spec.kind = TrajectoryKind::Circle;
    spec.radius = 1.5;
    spec.speed = 0.8;
    spec.height = 1.0;
    spec.duration = duration;
    spec.static_time = 0.5;
    spec.ramp_time = 1.0;
    return spec;
  }

  KeyframeState state_at(double t) const {
    const TrajectorySample s = trajectory.sample(t);
    KeyframeState kf;
    kf.p = s.p;
    kf.v = s.v;
    kf.q = s.q;
    kf.timestamp = t;
    return kf;
  }

  std::vector<ImuSample> imu_slice(double t0, double t1) const {
    std::vector<ImuSample> out;
    for (const auto& s : imu)
      if (s.timestamp >= t0 - 1e-9 && s.timestamp <= t1 + 1e-9) out.push_back(s);
    return out;
  }

  // Window with keyframes at the given times, exact states, exact
  // preintegrations, and oracle feature tracks anchored at their first
  // observation with the true inverse depth.
  SlidingWindow build_window(const std::vector<double>& times) const {
    SlidingWindow w;
    w.gravity = Vec3(0, 0, -9.81);
    for (int c = 0; c < 4; ++c) {
      CameraExtrinsic ext;
      ext.p = rig.cameras[size_t(c)].body_from_camera.translation;
      ext.q = rig.cameras[size_t(c)].body_from_camera.rotation;
      w.extrinsics.push_back(ext);
    }
    for (size_t i = 0; i < times.size(); ++i) {
      w.keyframes.push_back(state_at(times[i]));
      w.keyframe_ids.push_back(int(i));
      if (i > 0)
        w.preintegrations.push_back(preintegrate(imu_slice(times[i - 1], times[i]),
                                                 Vec3::Zero(), Vec3::Zero(), {}));
    }
    for (size_t i = 0; i < times.size(); ++i) {
      const SE3Pose body{w.keyframes[i].q, w.keyframes[i].p};
      const auto obs = oracle_observations(scene, rig, cyl_models, body);
      for (const auto& o : obs) {
        FeatureTrack& track = w.tracks[o.landmark];
        if (track.id < 0) {
          track.id = o.landmark;
          track.anchor_keyframe = int(i);
          track.anchor_camera = o.camera;
        }
        FeatureObservation fo;
        fo.keyframe_id = int(i);
        fo.camera = o.camera;
        fo.pixel = o.pixel;
        fo.bearing = o.bearing;
        track.observations.push_back(fo);
      }
    }
    // True inverse depths; drop tracks seen fewer than twice.
    for (auto it = w.tracks.begin(); it != w.tracks.end();) {
      FeatureTrack& track = it->second;
      if (track.observations.size() < 2) {
        it = w.tracks.erase(it);
        continue;
      }
      const int ai = w.index_of(track.anchor_keyframe);
      const SE3Pose cam = w.extrinsics[size_t(track.anchor_camera)].pose();
      const Vec3 center = w.keyframes[ai].q * cam.translation + w.keyframes[ai].p;
      const Vec3 dir =
          w.keyframes[ai].q * (cam.rotation * track.anchor_observation()->bearing);
      const double range = dir.dot(scene.landmarks[size_t(track.id)] - center);
      if (range <= 0.1) {
        it = w.tracks.erase(it);
        continue;
      }
      track.inverse_depth = 1.0 / range;
      ++it;
    }
    return w;
  }
};

}  // namespace omni::testing
