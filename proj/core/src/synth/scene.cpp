#include "omni/synth/scene.hpp"

#include <algorithm>
#include <cmath>

namespace omni {

namespace {

// Deterministic lattice hash -> [0, 1).
double lattice_hash(int64_t ix, int64_t iy, uint32_t seed) {
  uint64_t h = uint64_t(ix) * 0x9E3779B97F4A7C15ull;
  h ^= uint64_t(iy) * 0xC2B2AE3D27D4EB4Full;
  h ^= uint64_t(seed) * 0x165667B19E3779F9ull;
  h ^= h >> 29;
  h *= 0xBF58476D1CE4E5B9ull;
  h ^= h >> 32;
  return double(h >> 11) / double(1ull << 53);
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Band-limited value noise in [0, 1]: smooth bilinear interpolation of a
// hashed lattice at the plane's feature scale, two octaves.
double value_noise(double u, double v, double cell, uint32_t seed) {
  double out = 0.0;
  double weight = 0.0;
  double scale = 1.0 / std::max(cell, 1e-6);
  double amp = 1.0;
  for (int octave = 0; octave < 2; ++octave) {
    const double x = u * scale;
    const double y = v * scale;
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const int64_t ix = int64_t(fx);
    const int64_t iy = int64_t(fy);
    const double tx = smoothstep(x - fx);
    const double ty = smoothstep(y - fy);
    const double v00 = lattice_hash(ix, iy, seed + octave);
    const double v10 = lattice_hash(ix + 1, iy, seed + octave);
    const double v01 = lattice_hash(ix, iy + 1, seed + octave);
    const double v11 = lattice_hash(ix + 1, iy + 1, seed + octave);
    const double a = v00 + (v10 - v00) * tx;
    const double b = v01 + (v11 - v01) * tx;
    out += amp * (a + (b - a) * ty);
    weight += amp;
    scale *= 2.0;
    amp *= 0.5;
  }
  return out / weight;
}

}  // namespace

double texture_value(const TexturedPlane& plane, const Vec2& uv) {
  switch (plane.texture) {
    case TextureKind::Checkerboard: {
      const int64_t cu = int64_t(std::floor(uv.x() / plane.cell));
      const int64_t cv = int64_t(std::floor(uv.y() / plane.cell));
      const bool odd = ((cu + cv) & 1) != 0;
      return std::clamp(plane.base + (odd ? -plane.amplitude : plane.amplitude), 0.0,
                        255.0);
    }
    case TextureKind::Noise: {
      const double n = value_noise(uv.x(), uv.y(), plane.cell, plane.seed);
      return std::clamp(plane.base + plane.amplitude * (2.0 * n - 1.0), 0.0, 255.0);
    }
    case TextureKind::Uniform:
      return std::clamp(plane.base, 0.0, 255.0);
  }
  return 0.0;
}

std::optional<RayHit> raycast(const Scene& scene, const Vec3& origin, const Vec3& dir) {
  std::optional<RayHit> best;
  for (size_t i = 0; i < scene.planes.size(); ++i) {
    const TexturedPlane& plane = scene.planes[i];
    const Vec3 n = plane.normal();
    const double denom = dir.dot(n);
    if (std::abs(denom) < 1e-12) continue;
    const double t = (plane.center - origin).dot(n) / denom;
    if (t <= 1e-6) continue;
    if (best && t >= best->distance) continue;
    const Vec3 rel = origin + t * dir - plane.center;
    const double u = rel.dot(plane.u_axis);
    const double v = rel.dot(plane.v_axis);
    if (std::abs(u) > plane.u_half || std::abs(v) > plane.v_half) continue;
    best = RayHit{t, int(i), Vec2(u, v)};
  }
  return best;
}

Scene Scene::room(double half_size, double height, uint32_t seed,
                  int landmarks_per_wall) {
  Scene scene;
  const double hh = 0.5 * height;
  const Vec3 up = Vec3::UnitZ();

  // Walls facing inward: +x, +y, -x, -y sides.
  const Vec3 centers[4] = {
      Vec3(half_size, 0, hh), Vec3(0, half_size, hh), Vec3(-half_size, 0, hh),
      Vec3(0, -half_size, hh)};
  const Vec3 u_axes[4] = {Vec3(0, 1, 0), Vec3(-1, 0, 0), Vec3(0, -1, 0),
                          Vec3(1, 0, 0)};
  for (int wall = 0; wall < 4; ++wall) {
    TexturedPlane p;
    p.center = centers[wall];
    p.u_axis = u_axes[wall];
    p.v_axis = up;
    p.u_half = half_size;
    p.v_half = hh;
    p.texture = TextureKind::Noise;
    p.cell = 0.15;
    p.base = 130.0;
    p.amplitude = 110.0;
    p.seed = seed * 4 + uint32_t(wall);
    scene.planes.push_back(p);
  }

  // Aperiodic floor/ceiling texture: repetitive patterns alias under LK.
  TexturedPlane floor;
  floor.center = Vec3(0, 0, 0);
  floor.u_axis = Vec3::UnitX();
  floor.v_axis = Vec3::UnitY();
  floor.u_half = half_size;
  floor.v_half = half_size;
  floor.texture = TextureKind::Noise;
  floor.cell = 0.25;
  floor.base = 120.0;
  floor.amplitude = 100.0;
  floor.seed = seed * 4 + 17;
  scene.planes.push_back(floor);

  TexturedPlane ceiling = floor;
  ceiling.center = Vec3(0, 0, height);
  ceiling.cell = 0.35;
  ceiling.seed = seed * 4 + 23;
  scene.planes.push_back(ceiling);

  // Landmarks scattered on the walls, pulled a hair inside the surface so
  // they are never self-occluded by their own wall.
  for (int wall = 0; wall < 4; ++wall) {
    const TexturedPlane& p = scene.planes[wall];
    const Vec3 inward = -p.normal().normalized();
    for (int k = 0; k < landmarks_per_wall; ++k) {
      const double u =
          (lattice_hash(k, wall, seed + 101) * 2.0 - 1.0) * (p.u_half * 0.92);
      const double v =
          (lattice_hash(k, wall, seed + 202) * 2.0 - 1.0) * (p.v_half * 0.85);
      scene.landmarks.push_back(p.center + u * p.u_axis + v * p.v_axis +
                                1e-4 * inward);
    }
  }
  return scene;
}

}  // namespace omni
