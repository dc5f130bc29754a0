#include "omni/vio/preintegration.hpp"

namespace omni {

void PreintegratedImu::corrected(const Vec3& ba, const Vec3& bg, Vec3* p, Quat* q,
                                 Vec3* v) const {
  const Vec3 dba = ba - lin_ba;
  const Vec3 dbg = bg - lin_bg;
  if (p) *p = delta_p + dp_dba() * dba + dp_dbg() * dbg;
  if (v) *v = delta_v + dv_dba() * dba + dv_dbg() * dbg;
  if (q) {
    *q = delta_q * exp_so3(dq_dbg() * dbg);
    q->normalize();
  }
}

PreintegratedImu preintegrate(const std::vector<ImuSample>& samples, const Vec3& ba,
                              const Vec3& bg, const ImuNoiseParams& noise) {
  if (samples.size() < 2) throw EmptyInterval("preintegrate: need at least 2 samples");
  PreintegratedImu pre;
  pre.lin_ba = ba;
  pre.lin_bg = bg;
  pre.samples = samples;

  using Mat15 = Eigen::Matrix<double, 15, 15>;
  using Mat15x18 = Eigen::Matrix<double, 15, 18>;
  const Mat3 I = Mat3::Identity();

  for (size_t k = 0; k + 1 < samples.size(); ++k) {
    const ImuSample& s0 = samples[k];
    const ImuSample& s1 = samples[k + 1];
    const double dt = s1.timestamp - s0.timestamp;
    if (dt <= 0.0) throw NonMonotoneTime("preintegrate: timestamps must increase");

    const Vec3 w = 0.5 * (s0.gyro + s1.gyro) - bg;
    const Vec3 a0 = s0.accel - ba;
    const Vec3 a1 = s1.accel - ba;

    const Quat q0 = pre.delta_q;
    Quat q1 = q0 * exp_so3(w * dt);
    q1.normalize();

    const Vec3 acc0_w = q0 * a0;
    const Vec3 acc1_w = q1 * a1;
    const Vec3 acc_mid = 0.5 * (acc0_w + acc1_w);

    const Vec3 p_new = pre.delta_p + pre.delta_v * dt + 0.5 * acc_mid * dt * dt;
    const Vec3 v_new = pre.delta_v + acc_mid * dt;

    const Mat3 R0 = q0.toRotationMatrix();
    const Mat3 R1 = q1.toRotationMatrix();
    const Mat3 wx = skew(w);
    const Mat3 a0x = skew(a0);
    const Mat3 a1x = skew(a1);
    const double dt2 = dt * dt;

    Mat15 F = Mat15::Identity();
    F.block<3, 3>(0, 3) =
        -0.25 * R0 * a0x * dt2 - 0.25 * R1 * a1x * (I - wx * dt) * dt2;
    F.block<3, 3>(0, 6) = I * dt;
    F.block<3, 3>(0, 9) = -0.25 * (R0 + R1) * dt2;
    F.block<3, 3>(0, 12) = 0.25 * R1 * a1x * dt2 * dt;
    F.block<3, 3>(3, 3) = I - wx * dt;
    F.block<3, 3>(3, 12) = -I * dt;
    F.block<3, 3>(6, 3) = -0.5 * R0 * a0x * dt - 0.5 * R1 * a1x * (I - wx * dt) * dt;
    F.block<3, 3>(6, 9) = -0.5 * (R0 + R1) * dt;
    F.block<3, 3>(6, 12) = 0.5 * R1 * a1x * dt * dt;

    Mat15x18 V = Mat15x18::Zero();
    V.block<3, 3>(0, 0) = 0.25 * R0 * dt2;
    V.block<3, 3>(0, 3) = -0.125 * R1 * a1x * dt2 * dt;
    V.block<3, 3>(0, 6) = 0.25 * R1 * dt2;
    V.block<3, 3>(0, 9) = V.block<3, 3>(0, 3);
    V.block<3, 3>(3, 3) = 0.5 * I * dt;
    V.block<3, 3>(3, 9) = 0.5 * I * dt;
    V.block<3, 3>(6, 0) = 0.5 * R0 * dt;
    V.block<3, 3>(6, 3) = -0.25 * R1 * a1x * dt2;
    V.block<3, 3>(6, 6) = 0.5 * R1 * dt;
    V.block<3, 3>(6, 9) = V.block<3, 3>(6, 3);
    V.block<3, 3>(9, 12) = I * dt;
    V.block<3, 3>(12, 15) = I * dt;

    // Continuous densities discretized at this step's rate.
    Eigen::Matrix<double, 18, 18> Q = Eigen::Matrix<double, 18, 18>::Zero();
    const double an2 = noise.accel_noise_density * noise.accel_noise_density / dt;
    const double gn2 = noise.gyro_noise_density * noise.gyro_noise_density / dt;
    const double aw2 = noise.accel_bias_walk * noise.accel_bias_walk / dt;
    const double gw2 = noise.gyro_bias_walk * noise.gyro_bias_walk / dt;
    Q.block<3, 3>(0, 0) = an2 * I;
    Q.block<3, 3>(3, 3) = gn2 * I;
    Q.block<3, 3>(6, 6) = an2 * I;
    Q.block<3, 3>(9, 9) = gn2 * I;
    Q.block<3, 3>(12, 12) = aw2 * I;
    Q.block<3, 3>(15, 15) = gw2 * I;

    pre.jacobian = F * pre.jacobian;
    pre.covariance = F * pre.covariance * F.transpose() + V * Q * V.transpose();
    pre.covariance = 0.5 * (pre.covariance + pre.covariance.transpose());

    pre.delta_p = p_new;
    pre.delta_v = v_new;
    pre.delta_q = q1;
    pre.dt_total += dt;
  }
  return pre;
}

}  // namespace omni
