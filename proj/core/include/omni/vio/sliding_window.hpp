#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "omni/geometry/camera_cylindrical.hpp"
#include "omni/vio/preintegration.hpp"

namespace omni {

/// One keyframe of Eq-style VIO state: world-frame position, velocity,
/// attitude (world-from-body) and IMU biases.
struct KeyframeState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Quat q = Quat::Identity();
  Vec3 ba = Vec3::Zero();
  Vec3 bg = Vec3::Zero();
  double timestamp = 0.0;
};

/// Body-from-camera extrinsic, one per fisheye.
struct CameraExtrinsic {
  Vec3 p = Vec3::Zero();
  Quat q = Quat::Identity();

  SE3Pose pose() const { return SE3Pose{q, p}; }
};

struct FeatureObservation {
  int keyframe_id = -1;
  int camera = -1;
  Vec2 pixel = Vec2::Zero();     // cylindrical tracking-image coordinates
  Vec3 bearing = Vec3::Zero();   // unit ray in the camera frame
};

struct FeatureTrack {
  int id = -1;
  double inverse_depth = -1.0;  // 1/m along the anchor bearing; <0 until init
  int anchor_keyframe = -1;
  int anchor_camera = -1;
  std::vector<FeatureObservation> observations;

  const FeatureObservation* find(int keyframe_id, int camera) const;
  const FeatureObservation* anchor_observation() const {
    return find(anchor_keyframe, anchor_camera);
  }
  bool initialized() const { return inverse_depth > 0.0; }
};

/// Gaussian prior over a subset of keyframes in square-root form:
/// residual = r0 + J * (X [-] X0), ordered by keyframe id.
struct MarginalizationPrior {
  std::vector<int> keyframe_ids;
  std::vector<KeyframeState> lin_points;  // aligned with keyframe_ids
  Eigen::MatrixXd jacobian;               // m x (15 * keyframes)
  Eigen::VectorXd residual0;              // m

  bool empty() const { return keyframe_ids.empty(); }
};

struct SlidingWindow {
  static constexpr int kMaxKeyframes = 11;  // window size 10 plus the newest

  std::deque<KeyframeState> keyframes;
  std::deque<int> keyframe_ids;
  std::deque<PreintegratedImu> preintegrations;  // between consecutive keyframes
  std::vector<CameraExtrinsic> extrinsics;
  std::map<int, FeatureTrack> tracks;
  MarginalizationPrior prior;
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);

  int size() const { return int(keyframes.size()); }
  bool at_capacity() const { return size() >= kMaxKeyframes; }
  int index_of(int keyframe_id) const;
};

/// Mid-point triangulation of a track into anchor-frame inverse depth.
/// Requires >= 2 observations with baseline angle > 1 degree.
enum class TriangulationStatus { Ok, InsufficientParallax, NegativeDepth };
TriangulationStatus triangulate_feature(const FeatureTrack& track,
                                        const SlidingWindow& window, double* lambda);

}  // namespace omni
