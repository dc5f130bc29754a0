#include "omni/stereo/image.hpp"

#include <algorithm>
#include <cmath>

namespace omni {

double Image::sample(double x, double y) const {
  x = std::clamp(x, 0.0, double(width - 1));
  y = std::clamp(y, 0.0, double(height - 1));
  const int x0 = std::min(int(x), width - 2 >= 0 ? width - 2 : 0);
  const int y0 = std::min(int(y), height - 2 >= 0 ? height - 2 : 0);
  const int x1 = std::min(x0 + 1, width - 1);
  const int y1 = std::min(y0 + 1, height - 1);
  const double ax = x - x0;
  const double ay = y - y0;
  const double top = (1.0 - ax) * at(x0, y0) + ax * at(x1, y0);
  const double bot = (1.0 - ax) * at(x0, y1) + ax * at(x1, y1);
  return (1.0 - ay) * top + ay * bot;
}

}  // namespace omni
