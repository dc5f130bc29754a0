#pragma once

#include <cstdint>
#include <vector>

namespace omni {

/// Single-channel 8-bit image, row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;

  Image() = default;
  Image(int w, int h, uint8_t fill = 0) : width(w), height(h), data(size_t(w) * h, fill) {}

  uint8_t& at(int x, int y) { return data[size_t(y) * width + x]; }
  uint8_t at(int x, int y) const { return data[size_t(y) * width + x]; }

  bool in_bounds(int x, int y) const {
    return x >= 0 && y >= 0 && x < width && y < height;
  }

  /// Bilinear sample at sub-pixel coordinates; caller guarantees
  /// 0 <= x <= width-1, 0 <= y <= height-1.
  double sample(double x, double y) const;

  bool operator==(const Image& other) const = default;
};

}  // namespace omni
