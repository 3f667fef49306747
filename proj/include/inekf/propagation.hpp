#pragma once

#include "inekf/config.hpp"
#include "inekf/state.hpp"

namespace inekf {

struct ImuSample {
  double t = 0.0;
  Vec3 gyro = Vec3::Zero();   // rad/s, body frame
  Vec3 accel = Vec3::Zero();  // m/s^2, body frame (specific force by default)
};

// Continuous-time Jacobian A of the left-invariant error dynamics at the
// current bias estimate. Depends only on the bias-corrected body rates, not
// on the pose; that independence is what the invariant construction buys.
Mat15 left_invariant_jacobian(const RobotState& s, const ImuSample& u);

// Strapdown mean update plus first-order covariance propagation:
//   Phi = I + A*dt,  P <- Phi P Phi^T + Phi Qc Phi^T dt.
// Throws NonMonotonicTime for dt <= 0 and GapTooLarge for dt beyond the
// configured bound.
void propagate(RobotState& s, Covariance15& P, const ImuSample& u, double dt,
               const FilterConfig& cfg);

}  // namespace inekf
