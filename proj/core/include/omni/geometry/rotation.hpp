#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace omni {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

/// Skew-symmetric matrix such that skew(a) * b = a.cross(b).
Mat3 skew(const Vec3& a);

/// Exponential map so(3) -> SO(3), returns a unit quaternion.
Quat exp_so3(const Vec3& phi);

/// Logarithm map SO(3) -> so(3) as a rotation vector.
Vec3 log_so3(const Quat& q);

/// Rotation about the y axis by angle (radians).
Quat rot_y(double angle);

/// Rotation about the z axis by angle (radians).
Quat rot_z(double angle);

/// Angular distance between two rotations in radians.
double rotation_angle(const Quat& a, const Quat& b);

/// Rigid transform: x_out = rotation * x_in + translation.
struct SE3Pose {
  Quat rotation = Quat::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 act(const Vec3& p) const { return rotation * p + translation; }

  SE3Pose inverse() const {
    SE3Pose out;
    out.rotation = rotation.conjugate();
    out.translation = -(out.rotation * translation);
    return out;
  }

  SE3Pose operator*(const SE3Pose& rhs) const {
    SE3Pose out;
    out.rotation = rotation * rhs.rotation;
    out.rotation.normalize();
    out.translation = rotation * rhs.translation + translation;
    return out;
  }

  static SE3Pose identity() { return SE3Pose{}; }
};

}  // namespace omni
