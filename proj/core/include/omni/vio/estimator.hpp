#pragma once

#include <array>
#include <functional>

#include "omni/io/config.hpp"
#include "omni/io/trajectory_io.hpp"
#include "omni/stereo/remap.hpp"
#include "omni/vio/feature_tracker.hpp"
#include "omni/vio/marginalization.hpp"

namespace omni {

struct InitializationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VioStats {
  int frames = 0;
  int keyframes = 0;
  int tracking_lost_events = 0;
  int solver_failures = 0;
};

/// Predicts a feature into another camera's cylindrical view via the relative
/// geometry and a depth guess, then LK-refines from the seed with a reverse
/// check. Nullopt when the prediction leaves the target image or refinement
/// fails.
std::optional<Vec2> cross_camera_track(
    const Vec2& source_pixel, double depth_guess, const ImagePyramid& source_pyr,
    const ImagePyramid& target_pyr, const CylindricalCamera& source_model,
    const CylindricalCamera& target_model, const SE3Pose& target_from_source,
    const TrackParams& params = {});

/// Sliding-window visual-inertial odometry over the four-fisheye rig.
/// Fisheye frames are remapped to per-camera 190-degree cylindrical views,
/// features are Shi-Tomasi corners tracked with pyramidal LK (with
/// cross-camera handoff between adjacent views), and keyframes are jointly
/// optimized with preintegrated IMU factors and a marginalization prior.
///
/// Initialization is static-interval based: the sequence must begin at rest
/// for at least `static_init_time`; gravity comes from the mean specific
/// force, the gyro bias from the mean rate, and the first keyframe is pinned
/// at the identity. Deterministic: identical inputs give identical outputs.
class VioEstimator {
 public:
  /// `two_cameras_only` restricts tracking to the adjacent pair (A, B),
  /// emulating a limited-FoV stereo baseline.
  explicit VioEstimator(const RigConfig& config, bool two_cameras_only = false);

  void push_imu(const ImuSample& sample);

  /// Processes one synchronized four-camera frame (all IMU samples up to `t`
  /// must have been pushed) and returns the pose estimate for this frame.
  SE3Pose push_frame(double t, const std::array<Image, 4>& fisheye);

  const TrajectoryData& trajectory() const { return trajectory_; }
  const VioStats& stats() const { return stats_; }
  const SlidingWindow& window() const { return window_; }
  bool initialized() const { return initialized_; }

 private:
  struct ActiveTrack {
    int id = -1;
    Vec2 pixel = Vec2::Zero();     // current cylindrical position
    Vec2 kf_pixel = Vec2::Zero();  // position at the last keyframe
  };

  void initialize(double t);
  void make_keyframe(double t);
  void detect_new_features(int cam, int keyframe_id);
  void handoff_cross_camera(int keyframe_id);
  void triangulate_pending();
  KeyframeState propagate_to(double t) const;

  RigConfig cfg_;
  std::vector<int> active_cams_;
  std::vector<CylindricalCamera> cyl_models_;
  std::array<RemapTable, 4> cyl_tables_;
  TrackParams track_params_;
  DetectParams detect_params_;
  OptimizeOptions opt_options_;

  SlidingWindow window_;
  std::array<std::vector<ActiveTrack>, 4> active_;
  std::array<ImagePyramid, 4> prev_pyr_;
  std::array<ImagePyramid, 4> cur_pyr_;
  bool has_prev_ = false;

  std::vector<ImuSample> imu_interval_;  // since the last keyframe (inclusive)
  std::vector<ImuSample> init_buffer_;
  bool initialized_ = false;
  int next_track_id_ = 0;
  int next_keyframe_id_ = 0;
  double last_keyframe_time_ = 0.0;

  TrajectoryData trajectory_;
  VioStats stats_;
};

/// Batch driver: interleaves the IMU stream with the frame stream by
/// timestamp and returns one trajectory row per frame.
TrajectoryData run_vio(const RigConfig& config, const std::vector<double>& frame_times,
                       const std::function<std::array<Image, 4>(int)>& load_frame,
                       const std::vector<ImuSample>& imu,
                       bool two_cameras_only = false, VioStats* stats = nullptr);

}  // namespace omni
