#pragma once

#include <memory>

#include "omni/stereo/image.hpp"
#include "omni/stereo/remap.hpp"

namespace omni {

struct DisparityMap {
  int width = 0;
  int height = 0;
  std::vector<float> disparity;  // pixels, sub-pixel
  std::vector<uint8_t> valid;

  DisparityMap() = default;
  DisparityMap(int w, int h)
      : width(w), height(h), disparity(size_t(w) * h, 0.0f), valid(size_t(w) * h, 0) {}

  size_t index(int x, int y) const { return size_t(y) * width + x; }
  int valid_count() const;
};

struct BlockMatchParams {
  int window = 9;            // odd SAD window side
  int min_disparity = 0;
  int max_disparity = 64;
  double lr_threshold = 1.0;     // left-right consistency, pixels
  double texture_variance = 25.0;  // 8-bit intensity variance floor
};

/// Disparity estimator for a rectified pair; output is aligned with the left
/// image. Implementations must be deterministic for identical inputs.
class DisparityBackend {
 public:
  virtual ~DisparityBackend() = default;
  virtual DisparityMap compute(const Image& left, const Image& right) const = 0;
  virtual const char* name() const = 0;
};

/// Local SAD block matching with left-right check and parabolic sub-pixel
/// refinement. Reference backend for the pluggable contract.
class BlockMatchBackend : public DisparityBackend {
 public:
  explicit BlockMatchBackend(const BlockMatchParams& params = {}) : params_(params) {}
  DisparityMap compute(const Image& left, const Image& right) const override;
  const char* name() const override { return "block_match"; }

 private:
  BlockMatchParams params_;
};

DisparityMap block_match_disparity(const Image& left, const Image& right,
                                   const BlockMatchParams& params = {});

}  // namespace omni
