#include "omni/vio/sliding_window.hpp"

#include <cmath>

namespace omni {

const FeatureObservation* FeatureTrack::find(int keyframe_id, int camera) const {
  for (const auto& obs : observations)
    if (obs.keyframe_id == keyframe_id && obs.camera == camera) return &obs;
  return nullptr;
}

int SlidingWindow::index_of(int keyframe_id) const {
  for (int i = 0; i < int(keyframe_ids.size()); ++i)
    if (keyframe_ids[i] == keyframe_id) return i;
  return -1;
}

TriangulationStatus triangulate_feature(const FeatureTrack& track,
                                        const SlidingWindow& window, double* lambda) {
  struct Ray {
    Vec3 origin;
    Vec3 dir;
  };
  std::vector<Ray> rays;
  const Ray* anchor_ray = nullptr;
  size_t anchor_index = 0;
  for (const auto& obs : track.observations) {
    const int idx = window.index_of(obs.keyframe_id);
    if (idx < 0 || obs.camera >= int(window.extrinsics.size())) continue;
    const KeyframeState& kf = window.keyframes[idx];
    const SE3Pose cam = window.extrinsics[obs.camera].pose();
    Ray ray;
    ray.origin = kf.q * cam.translation + kf.p;
    ray.dir = kf.q * (cam.rotation * obs.bearing);
    rays.push_back(ray);
    if (obs.keyframe_id == track.anchor_keyframe && obs.camera == track.anchor_camera)
      anchor_index = rays.size() - 1;
  }
  if (rays.size() < 2) return TriangulationStatus::InsufficientParallax;
  anchor_ray = &rays[anchor_index];

  const double min_angle = 1.0 * M_PI / 180.0;
  double max_angle = 0.0;
  for (size_t i = 0; i < rays.size(); ++i)
    for (size_t j = i + 1; j < rays.size(); ++j) {
      const double c = std::clamp(rays[i].dir.dot(rays[j].dir), -1.0, 1.0);
      max_angle = std::max(max_angle, std::acos(c));
    }
  if (max_angle < min_angle) return TriangulationStatus::InsufficientParallax;

  // Linear midpoint: minimize the sum of squared distances to all rays.
  Mat3 a = Mat3::Zero();
  Vec3 b = Vec3::Zero();
  for (const Ray& ray : rays) {
    const Mat3 m = Mat3::Identity() - ray.dir * ray.dir.transpose();
    a += m;
    b += m * ray.origin;
  }
  const Vec3 x = a.ldlt().solve(b);

  const double range = anchor_ray->dir.dot(x - anchor_ray->origin);
  if (range <= 0.0) return TriangulationStatus::NegativeDepth;
  *lambda = 1.0 / range;
  return TriangulationStatus::Ok;
}

}  // namespace omni
