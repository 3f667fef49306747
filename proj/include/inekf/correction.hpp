#pragma once

#include <Eigen/Dense>

#include "inekf/config.hpp"
#include "inekf/state.hpp"

namespace inekf {

// A raw geodetic fix as read from a receiver log.
struct GpsFix {
  double t = 0.0;
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_m = 0.0;
  Vec3 sigma_enu = Vec3::Ones();  // (east, north, up) one-sigma, m
};

// A fix already projected into the local ENU frame.
struct PositionFixEnu {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
  Vec3 sigma = Vec3::Ones();
};

// Left-invariant measurement in tangent coordinates: innovation z, Jacobian H
// (rows x 15) and noise N expressed in the body frame.
struct Measurement {
  Eigen::VectorXd z;
  Eigen::MatrixXd H;
  Eigen::MatrixXd N;
};

// z = R^T (p_meas - p): world position error pulled into the body frame.
Vec3 position_innovation(const RobotState& s, const Vec3& p_meas);

// Constant H = [0 0 I 0 0]; the identity sits on the position block.
Eigen::Matrix<double, 3, 15> position_jacobian();

// N = R^T diag(sigma^2) R: world-frame receiver noise seen from the body.
Mat3 position_noise(const RobotState& s, const Vec3& sigma_enu);

Measurement make_position_measurement(const RobotState& s, const Vec3& p_meas,
                                      const Vec3& sigma_enu);

// Stacked basis-vector residuals (R^T R_meas e_i - e_i) for i = 1..3.
Vec9 orientation_innovations(const RobotState& s, const Mat3& R_meas);

// Rows i: [-skew(e_i) 0]; only the rotation block is observed.
Eigen::Matrix<double, 9, 15> orientation_jacobian();

// Position plus full-orientation reference in one 12-dim update. sigma_rot is
// the per-axis noise of the reference's basis vectors (small angles: rad).
Measurement stack_pose_measurement(const RobotState& s, const Vec3& p_meas,
                                   const Mat3& R_meas, const Vec3& sigma_pos,
                                   const Vec3& sigma_rot);

struct CorrectionInfo {
  double nis = 0.0;  // z^T S^-1 z
  int dof = 0;
};

// Applies the gain selected by cfg.gain_mode, updates the group part
// right-multiplicatively and the biases additively, and runs the Joseph-form
// covariance update. Throws SingularInnovation when cond(S) > cfg.cond_max.
CorrectionInfo apply_correction(RobotState& s, Covariance15& P,
                                const Measurement& m, const FilterConfig& cfg);

}  // namespace inekf
