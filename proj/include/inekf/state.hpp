#pragma once

#include <utility>
#include <vector>

#include "inekf/config.hpp"
#include "inekf/lie.hpp"

namespace inekf {

// Filter state: orientation, world-frame velocity and position, IMU biases.
// (R, v, p) embeds in SE2(3); biases ride along as an Euclidean pair, so the
// full uncertainty lives in a 15-dim tangent with the layout from lie.hpp.
struct RobotState {
  Mat3 R = Mat3::Identity();
  Vec3 v = Vec3::Zero();
  Vec3 p = Vec3::Zero();
  Vec3 bg = Vec3::Zero();  // gyro bias, rad/s
  Vec3 ba = Vec3::Zero();  // accel bias, m/s^2
  double t = 0.0;

  Mat5 group() const;
  bool finite() const;
  Vec3 rpy() const { return rpy_from_rotation(R); }
  double yaw() const { return yaw_of(R); }
};

using Covariance15 = Mat15;

RobotState state_from_group(const Mat5& X, const Vec3& bg, const Vec3& ba, double t);

// One serialized row of a trajectory (ground truth or estimate).
struct StateSnapshot {
  double t = 0.0;
  Mat3 R = Mat3::Identity();
  Vec3 v = Vec3::Zero();
  Vec3 p = Vec3::Zero();
  Vec3 bg = Vec3::Zero();
  Vec3 ba = Vec3::Zero();

  StateSnapshot() = default;
  explicit StateSnapshot(const RobotState& s)
      : t(s.t), R(s.R), v(s.v), p(s.p), bg(s.bg), ba(s.ba) {}
};

using Trajectory = std::vector<StateSnapshot>;

// Level attitude at the given yaw, zero velocity and biases, covariance from
// the configured initial sigmas.
std::pair<RobotState, Covariance15> initial_state(const Vec3& p0, double yaw,
                                                  const FilterConfig& cfg);

// Frobenius norm of P - P^T relative to the norm of P.
double covariance_asymmetry(const Covariance15& P);

bool covariance_is_symmetric(const Covariance15& P, double rel_tol = 1e-9);

// Smallest eigenvalue scaled by the largest; >= -rel_tol counts as PSD.
double covariance_min_eig_ratio(const Covariance15& P);

}  // namespace inekf
