#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "inekf/errors.hpp"
#include "inekf/propagation.hpp"
#include "error_dynamics_fd.hpp"
#include "oracles.hpp"

using namespace inekf;

namespace {

FilterConfig quiet_config() {
  FilterConfig cfg;
  cfg.noise = NoiseParams{0.0, 0.0, 0.0, 0.0};
  return cfg;
}

}  // namespace

TEST_CASE("stationary equilibrium: specific force cancels gravity") {
  FilterConfig cfg = quiet_config();
  RobotState s;
  Covariance15 P = Covariance15::Identity();

  ImuSample u;
  u.accel = Vec3(0, 0, 9.81);  // -g at identity attitude
  for (int k = 1; k <= 100; ++k) {
    u.t = 0.01 * k;
    propagate(s, P, u, 0.01, cfg);
  }
  CHECK((s.R - Mat3::Identity()).norm() < 1e-12);
  CHECK(s.v.norm() < 1e-12);
  CHECK(s.p.norm() < 1e-12);
  CHECK(s.t == doctest::Approx(1.0));
}

TEST_CASE("constant yaw rate integrates to the closed form") {
  FilterConfig cfg = quiet_config();
  RobotState s;
  Covariance15 P = Covariance15::Identity();

  const double dt = 0.01;
  for (int k = 1; k <= 1000; ++k) {
    ImuSample u;
    u.t = dt * k;
    u.gyro = Vec3(0, 0, 0.1);
    u.accel = s.R.transpose() * Vec3(0, 0, 9.81);
    propagate(s, P, u, dt, cfg);
  }
  CHECK(std::abs(s.yaw() - 1.0) < 1e-6);
  CHECK(s.v.norm() < 1e-9);
  CHECK(s.p.norm() < 1e-9);
  CHECK(is_rotation(s.R, 1e-11));
}

TEST_CASE("constant world acceleration from rest") {
  FilterConfig cfg = quiet_config();
  RobotState s;
  Covariance15 P = Covariance15::Identity();

  const double dt = 0.01;
  for (int k = 1; k <= 200; ++k) {
    ImuSample u;
    u.t = dt * k;
    u.accel = s.R.transpose() * (Vec3(1, 0, 0) + Vec3(0, 0, 9.81));
    propagate(s, P, u, dt, cfg);
  }
  CHECK(std::abs(s.p.x() - 2.0) < 2e-2);
  CHECK(std::abs(s.v.x() - 2.0) < 1e-3);
  CHECK(std::abs(s.p.y()) < 1e-12);
  CHECK(std::abs(s.p.z()) < 1e-9);
}

TEST_CASE("biases shift the effective body rates") {
  FilterConfig cfg = quiet_config();
  cfg.max_imu_dt_s = 1.0;
  RobotState s;
  s.bg = Vec3(0, 0, 0.1);
  Covariance15 P = Covariance15::Identity();

  ImuSample u;
  u.t = 0.5;
  u.gyro = Vec3(0, 0, 0.1);  // cancelled exactly by the bias estimate
  u.accel = Vec3(0, 0, 9.81);
  propagate(s, P, u, 0.5, cfg);
  CHECK((s.R - Mat3::Identity()).norm() < 1e-14);
  CHECK(s.bg == Vec3(0, 0, 0.1));  // biases are a random-walk mean: constant
}

TEST_CASE("time contract violations throw") {
  FilterConfig cfg;
  RobotState s;
  Covariance15 P = Covariance15::Identity();
  ImuSample u;
  u.accel = Vec3(0, 0, 9.81);

  CHECK_THROWS_AS(propagate(s, P, u, 0.0, cfg), NonMonotonicTime);
  CHECK_THROWS_AS(propagate(s, P, u, -0.01, cfg), NonMonotonicTime);
  CHECK_THROWS_AS(propagate(s, P, u, 0.11, cfg), GapTooLarge);
  cfg.max_imu_dt_s = 0.5;
  u.t = 0.2;
  CHECK_NOTHROW(propagate(s, P, u, 0.2, cfg));
}

TEST_CASE("left_invariant_jacobian block layout") {
  RobotState s;
  s.bg = Vec3(0.01, -0.02, 0.03);
  s.ba = Vec3(-0.1, 0.2, -0.3);
  ImuSample u;
  u.gyro = Vec3(0.3, -0.2, 0.5);
  u.accel = Vec3(1.0, -2.0, 9.0);

  const Vec3 w = u.gyro - s.bg;
  const Vec3 a = u.accel - s.ba;
  Mat15 expect = Mat15::Zero();
  expect.block<3, 3>(kRotBlock, kRotBlock) = -skew(w);
  expect.block<3, 3>(kRotBlock, kGyroBiasBlock) = -Mat3::Identity();
  expect.block<3, 3>(kVelBlock, kRotBlock) = -skew(a);
  expect.block<3, 3>(kVelBlock, kVelBlock) = -skew(w);
  expect.block<3, 3>(kVelBlock, kAccelBiasBlock) = -Mat3::Identity();
  expect.block<3, 3>(kPosBlock, kVelBlock) = Mat3::Identity();
  expect.block<3, 3>(kPosBlock, kPosBlock) = -skew(w);

  CHECK((left_invariant_jacobian(s, u) - expect).norm() == 0.0);

  // Zero body rates: only velocity-into-position coupling and bias feeds.
  RobotState s0;
  ImuSample u0;
  const Mat15 A0 = left_invariant_jacobian(s0, u0);
  Mat15 expect0 = Mat15::Zero();
  expect0.block<3, 3>(kPosBlock, kVelBlock) = Mat3::Identity();
  expect0.block<3, 3>(kRotBlock, kGyroBiasBlock) = -Mat3::Identity();
  expect0.block<3, 3>(kVelBlock, kAccelBiasBlock) = -Mat3::Identity();
  CHECK((A0 - expect0).norm() == 0.0);
}

TEST_CASE("jacobian matches the finite-difference error dynamics") {
  const Vec3 g(0, 0, -9.81);
  std::normal_distribution<double> n01;
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    RobotState s;
    s.R = oracle::random_rotation();
    s.v = oracle::random_vec3(2.0);
    // Modest position keeps the log-map roundoff (~eps * |p|) well below the
    // finite-difference signal; the jacobian itself has no position dependence.
    s.p = oracle::random_vec3(2.0);
    s.bg = oracle::random_vec3(0.02);
    s.ba = oracle::random_vec3(0.2);

    ImuSample u;
    u.gyro = oracle::random_vec3(0.5);
    u.accel = oracle::random_vec3(3.0) + s.R.transpose() * Vec3(0, 0, 9.81);

    Vec15 zeta;
    for (int i = 0; i < 15; ++i) zeta(i) = 3e-6 * n01(oracle::rng());

    const Vec15 fd = oracle::fd_error_rate(s, u, g, zeta);
    const Vec15 an = left_invariant_jacobian(s, u) * zeta;
    const double rel = (fd - an).norm() / std::max(an.norm(), 1e-12);
    worst = std::max(worst, rel);
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("mean propagation is left-invariant under planar group elements") {
  // X0 = (yaw rotation, v0 = 0, translation): the only left translations the
  // gravity vector and the velocity-time coupling leave exact.
  FilterConfig cfg = quiet_config();
  const Mat3 R0 = rot_z(1.1);
  const Vec3 p0(50.0, -20.0, 3.0);

  RobotState a;  // moving, turning state
  a.R = rot_z(0.4);
  a.v = Vec3(1.5, 0.7, 0.0);
  a.p = Vec3(3.0, -2.0, 0.0);

  RobotState b;
  b.R = R0 * a.R;
  b.v = R0 * a.v;
  b.p = R0 * a.p + p0;

  Covariance15 Pa = Covariance15::Identity();
  Covariance15 Pb = Covariance15::Identity();

  const double dt = 0.01;
  for (int k = 1; k <= 500; ++k) {
    ImuSample u;
    u.t = dt * k;
    u.gyro = Vec3(0.02, -0.01, 0.2);
    u.accel = Vec3(0.3, 0.1, 0.0) + a.R.transpose() * Vec3(0, 0, 9.81);
    propagate(a, Pa, u, dt, cfg);
    propagate(b, Pb, u, dt, cfg);
  }

  CHECK((b.R - R0 * a.R).norm() < 1e-10);
  CHECK((b.v - R0 * a.v).norm() < 1e-10);
  CHECK((b.p - (R0 * a.p + p0)).norm() < 1e-10);
}

TEST_CASE("covariance grows under propagation with positive noise") {
  FilterConfig cfg;  // default noise densities, all positive
  RobotState s;
  auto [s0, P] = initial_state(Vec3::Zero(), 0.0, cfg);
  s = s0;

  const double dt = 0.005;
  double prev_trace = P.trace();
  for (int k = 1; k <= 2000; ++k) {
    ImuSample u;
    u.t = dt * k;
    u.gyro = Vec3(0, 0, 0.1);
    u.accel = s.R.transpose() * Vec3(0, 0, 9.81) + Vec3(0.2, 0, 0);
    propagate(s, P, u, dt, cfg);
    CHECK(P.trace() >= prev_trace - 1e-12 * prev_trace);
    prev_trace = P.trace();
  }
  CHECK(covariance_is_symmetric(P));
  CHECK(covariance_min_eig_ratio(P) >= -1e-9);
}
