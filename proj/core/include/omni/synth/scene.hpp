#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "omni/geometry/rotation.hpp"

namespace omni {

enum class TextureKind { Checkerboard, Noise, Uniform };

/// Finite textured rectangle: center +/- half extents along two orthonormal
/// in-plane axes. The surface normal is u_axis x v_axis.
struct TexturedPlane {
  Vec3 center = Vec3::Zero();
  Vec3 u_axis = Vec3::UnitX();
  Vec3 v_axis = Vec3::UnitY();
  double u_half = 1.0;
  double v_half = 1.0;
  TextureKind texture = TextureKind::Checkerboard;
  double cell = 0.25;       // checker square / noise feature size, meters
  double base = 128.0;      // mean intensity, 8-bit scale
  double amplitude = 100.0; // intensity swing
  uint32_t seed = 0;        // noise lattice seed

  Vec3 normal() const { return u_axis.cross(v_axis); }
};

struct RayHit {
  double distance = 0.0;  // along the (unit) ray
  int plane = -1;
  Vec2 uv = Vec2::Zero();  // in-plane coordinates, meters
};

struct Scene {
  std::vector<TexturedPlane> planes;
  std::vector<Vec3> landmarks;  // exact oracle feature positions, world frame

  /// Square room: four walls at +/- half_size, floor at z=0, ceiling at
  /// `height`; walls textured with seeded value noise, floor/ceiling checkered.
  /// Landmarks are scattered over the walls deterministically from the seed.
  static Scene room(double half_size, double height, uint32_t seed,
                    int landmarks_per_wall = 40);
};

/// Procedural texture value at in-plane coordinates (continuous in uv for
/// noise; piecewise constant for the checkerboard).
double texture_value(const TexturedPlane& plane, const Vec2& uv);

/// Nearest intersection of the ray origin + t * dir (t > 1e-6) with the
/// scene's planes; dir need not be normalized (distance is in units of |dir|).
std::optional<RayHit> raycast(const Scene& scene, const Vec3& origin, const Vec3& dir);

}  // namespace omni
