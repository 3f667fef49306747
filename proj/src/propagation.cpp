#include "inekf/propagation.hpp"

#include <string>

#include "inekf/errors.hpp"

namespace inekf {

Mat15 left_invariant_jacobian(const RobotState& s, const ImuSample& u) {
  const Vec3 w = u.gyro - s.bg;
  const Vec3 a = u.accel - s.ba;
  const Mat3 wx = skew(w);

  Mat15 A = Mat15::Zero();
  A.block<3, 3>(kRotBlock, kRotBlock) = -wx;
  A.block<3, 3>(kRotBlock, kGyroBiasBlock) = -Mat3::Identity();
  A.block<3, 3>(kVelBlock, kRotBlock) = -skew(a);
  A.block<3, 3>(kVelBlock, kVelBlock) = -wx;
  A.block<3, 3>(kVelBlock, kAccelBiasBlock) = -Mat3::Identity();
  A.block<3, 3>(kPosBlock, kVelBlock) = Mat3::Identity();
  A.block<3, 3>(kPosBlock, kPosBlock) = -wx;
  return A;
}

void propagate(RobotState& s, Covariance15& P, const ImuSample& u, double dt,
               const FilterConfig& cfg) {
  if (dt <= 0.0) {
    throw NonMonotonicTime("imu dt " + std::to_string(dt) + " at t " +
                           std::to_string(u.t));
  }
  if (dt > cfg.max_imu_dt_s) {
    throw GapTooLarge("imu gap " + std::to_string(dt) + " s at t " +
                      std::to_string(u.t) + " exceeds " +
                      std::to_string(cfg.max_imu_dt_s));
  }

  const Mat15 A = left_invariant_jacobian(s, u);

  const Vec3 w = u.gyro - s.bg;
  const Vec3 a = u.accel - s.ba;
  const Vec3 acc_world =
      cfg.imu_includes_gravity ? Vec3(s.R * a + cfg.gravity) : Vec3(s.R * a);

  s.R = s.R * so3_exp((w * dt).eval());
  s.p = s.p + s.v * dt + 0.5 * acc_world * dt * dt;
  s.v = s.v + acc_world * dt;
  s.t += dt;

  if ((s.R.transpose() * s.R - Mat3::Identity()).norm() > 1e-9) {
    s.R = reorthonormalize(s.R);
  }

  Vec15 q;
  q.segment<3>(kRotBlock) = cfg.noise.gyro.array().square();
  q.segment<3>(kVelBlock) = cfg.noise.accel.array().square();
  q.segment<3>(kPosBlock).setZero();
  q.segment<3>(kGyroBiasBlock) = cfg.noise.gyro_bias.array().square();
  q.segment<3>(kAccelBiasBlock) = cfg.noise.accel_bias.array().square();

  const Mat15 Phi = Mat15::Identity() + A * dt;
  const Mat15 Qd = Phi * q.asDiagonal() * Phi.transpose() * dt;
  P = Phi * P * Phi.transpose() + Qd;
  P = 0.5 * (P + P.transpose());
}

}  // namespace inekf
