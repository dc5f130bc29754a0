#include "omni/vio/factors.hpp"

#include <Eigen/Cholesky>

namespace omni {

Eigen::Matrix4d quat_left(const Quat& q) {
  Eigen::Matrix4d m;
  m(0, 0) = q.w();
  m.block<1, 3>(0, 1) = -q.vec().transpose();
  m.block<3, 1>(1, 0) = q.vec();
  m.block<3, 3>(1, 1) = q.w() * Mat3::Identity() + skew(q.vec());
  return m;
}

Eigen::Matrix4d quat_right(const Quat& q) {
  Eigen::Matrix4d m;
  m(0, 0) = q.w();
  m.block<1, 3>(0, 1) = -q.vec().transpose();
  m.block<3, 1>(1, 0) = q.vec();
  m.block<3, 3>(1, 1) = q.w() * Mat3::Identity() - skew(q.vec());
  return m;
}

ImuResidual imu_residual(const PreintegratedImu& pre, const KeyframeState& sk,
                         const KeyframeState& sk1, const Vec3& gravity,
                         bool check_timestamps) {
  const double dt = pre.dt_total;
  if (check_timestamps && std::abs((sk1.timestamp - sk.timestamp) - dt) > 1e-6)
    throw TimestampMismatch("imu_residual: keyframe interval != preintegration span");

  // Deltas corrected to the earlier keyframe's bias.
  Vec3 alpha, beta;
  Quat gamma;
  pre.corrected(sk.ba, sk.bg, &alpha, &gamma, &beta);

  const Mat3 Ri_t = sk.q.toRotationMatrix().transpose();
  const Vec3 u_p = sk1.p - sk.p - sk.v * dt - 0.5 * gravity * dt * dt;
  const Vec3 u_v = sk1.v - sk.v - gravity * dt;

  Eigen::Matrix<double, 15, 1> r;
  r.segment<3>(0) = Ri_t * u_p - alpha;
  const Quat q_err = gamma.conjugate() * sk.q.conjugate() * sk1.q;
  r.segment<3>(3) = 2.0 * q_err.vec();
  r.segment<3>(6) = Ri_t * u_v - beta;
  r.segment<3>(9) = sk1.ba - sk.ba;
  r.segment<3>(12) = sk1.bg - sk.bg;

  using Mat15 = Eigen::Matrix<double, 15, 15>;
  Mat15 jk = Mat15::Zero();
  Mat15 jk1 = Mat15::Zero();
  const Mat3 I = Mat3::Identity();

  jk.block<3, 3>(0, 0) = -Ri_t;
  jk.block<3, 3>(0, 3) = skew(Ri_t * u_p);
  jk.block<3, 3>(0, 6) = -Ri_t * dt;
  jk.block<3, 3>(0, 9) = -pre.dp_dba();
  jk.block<3, 3>(0, 12) = -pre.dp_dbg();
  jk.block<3, 3>(3, 3) =
      -(quat_left(gamma.conjugate()) * quat_right(sk.q.conjugate() * sk1.q))
           .bottomRightCorner<3, 3>();
  jk.block<3, 3>(3, 12) =
      -(quat_right(gamma.conjugate() * sk.q.conjugate() * sk1.q))
           .bottomRightCorner<3, 3>() *
      pre.dq_dbg();
  jk.block<3, 3>(6, 3) = skew(Ri_t * u_v);
  jk.block<3, 3>(6, 6) = -Ri_t;
  jk.block<3, 3>(6, 9) = -pre.dv_dba();
  jk.block<3, 3>(6, 12) = -pre.dv_dbg();
  jk.block<3, 3>(9, 9) = -I;
  jk.block<3, 3>(12, 12) = -I;

  jk1.block<3, 3>(0, 0) = Ri_t;
  jk1.block<3, 3>(3, 3) =
      quat_left(gamma.conjugate() * sk.q.conjugate() * sk1.q).bottomRightCorner<3, 3>();
  jk1.block<3, 3>(6, 6) = Ri_t;
  jk1.block<3, 3>(9, 9) = I;
  jk1.block<3, 3>(12, 12) = I;

  // Whitening by the preintegration covariance.
  Mat15 info = pre.covariance;
  info.diagonal().array() += 1e-14;  // guard for zero-noise runs
  const Mat15 sqrt_info =
      Eigen::LLT<Mat15>(info.inverse()).matrixL().transpose();

  ImuResidual out;
  out.residual = sqrt_info * r;
  out.jac_k = sqrt_info * jk;
  out.jac_k1 = sqrt_info * jk1;
  return out;
}

std::optional<ReprojectionResidual> reprojection_residual(
    const Vec3& anchor_bearing, double lambda, const Vec2& observed_pixel,
    const KeyframeState& anchor_kf, const KeyframeState& observer_kf,
    const SE3Pose& anchor_cam, const SE3Pose& observer_cam,
    const CylindricalCamera& observer_model, const ReprojectionParams& params) {
  if (lambda <= 0.0) return std::nullopt;

  const Vec3 x_ca = anchor_bearing / lambda;
  const Vec3 x_ba = anchor_cam.act(x_ca);
  const Vec3 x_w = anchor_kf.q * x_ba + anchor_kf.p;
  const Vec3 x_bo = observer_kf.q.conjugate() * (x_w - observer_kf.p);
  const Vec3 x_co = observer_cam.rotation.conjugate() * (x_bo - observer_cam.translation);

  Eigen::Matrix<double, 2, 3> dproj;
  const auto uv = observer_model.project(x_co, &dproj);
  if (!uv || !observer_model.in_image(*uv)) return std::nullopt;

  const double w = 1.0 / params.pixel_sigma;
  ReprojectionResidual out;
  out.residual = w * (*uv - observed_pixel);

  const Mat3 Rco_b = observer_cam.rotation.toRotationMatrix().transpose();
  const Mat3 Rbo_w = observer_kf.q.toRotationMatrix().transpose();
  const Mat3 m = Rco_b * Rbo_w;  // world -> observer camera
  const Mat3 Rwi = anchor_kf.q.toRotationMatrix();

  out.jac_anchor.block<2, 3>(0, 0) = w * dproj * m;
  out.jac_anchor.block<2, 3>(0, 3) = -w * dproj * m * Rwi * skew(x_ba);
  out.jac_observer.block<2, 3>(0, 0) = -w * dproj * m;
  out.jac_observer.block<2, 3>(0, 3) = w * dproj * Rco_b * skew(x_bo);
  out.jac_lambda =
      w * dproj * (m * Rwi * anchor_cam.rotation.toRotationMatrix()) *
      (-anchor_bearing / (lambda * lambda));
  return out;
}

}  // namespace omni
