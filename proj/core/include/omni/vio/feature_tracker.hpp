#pragma once

#include <vector>

#include "omni/geometry/rotation.hpp"
#include "omni/stereo/image.hpp"

namespace omni {

struct DetectParams {
  int max_features = 150;
  double min_spacing = 20.0;      // pixels, to each other and to existing points
  double quality_level = 0.01;    // fraction of the strongest response
  double min_response = 25.0;     // absolute floor on the minimum eigenvalue
  int block_size = 3;             // structure-tensor summation window
  int border = 5;
};

/// Shi-Tomasi (minimum eigenvalue) corners with non-maximum suppression and
/// greedy spacing against existing points.
std::vector<Vec2> detect_features(const Image& img, const std::vector<Vec2>& existing,
                                  const DetectParams& params = {});

struct TrackParams {
  int pyramid_levels = 3;
  int window = 21;           // odd
  int max_iterations = 30;
  double epsilon = 0.01;     // step convergence, pixels
  double min_eig = 1e-4;     // normalized G conditioning floor
  double reverse_threshold = 0.5;  // pixels; reverse-track gate
};

struct ImagePyramid {
  std::vector<Image> levels;
  static ImagePyramid build(const Image& img, int num_levels);
};

/// Pyramidal Lucas-Kanade; `seeds` (when non-null) provides the initial
/// guess in `next`, otherwise points start at their previous location.
/// No reverse check here; see track_features.
void lk_track(const ImagePyramid& prev, const ImagePyramid& next,
              const std::vector<Vec2>& prev_pts, const std::vector<Vec2>* seeds,
              std::vector<Vec2>* next_pts, std::vector<uint8_t>* status,
              const TrackParams& params = {});

/// Forward track + reverse-tracking consistency gate.
void track_features(const Image& prev, const Image& next,
                    const std::vector<Vec2>& prev_pts, std::vector<Vec2>* next_pts,
                    std::vector<uint8_t>* status, const TrackParams& params = {});

}  // namespace omni
