#include "inekf/correction.hpp"

#include <stdexcept>
#include <string>

#include "inekf/errors.hpp"

namespace inekf {

Vec3 position_innovation(const RobotState& s, const Vec3& p_meas) {
  return s.R.transpose() * (p_meas - s.p);
}

Eigen::Matrix<double, 3, 15> position_jacobian() {
  Eigen::Matrix<double, 3, 15> H = Eigen::Matrix<double, 3, 15>::Zero();
  H.block<3, 3>(0, kPosBlock) = Mat3::Identity();
  return H;
}

Mat3 position_noise(const RobotState& s, const Vec3& sigma_enu) {
  return s.R.transpose() * sigma_enu.array().square().matrix().asDiagonal() * s.R;
}

Measurement make_position_measurement(const RobotState& s, const Vec3& p_meas,
                                      const Vec3& sigma_enu) {
  Measurement m;
  m.z = position_innovation(s, p_meas);
  m.H = position_jacobian();
  m.N = position_noise(s, sigma_enu);
  return m;
}

Vec9 orientation_innovations(const RobotState& s, const Mat3& R_meas) {
  const Mat3 E = s.R.transpose() * R_meas - Mat3::Identity();
  Vec9 z;
  z.segment<3>(0) = E.col(0);
  z.segment<3>(3) = E.col(1);
  z.segment<3>(6) = E.col(2);
  return z;
}

Eigen::Matrix<double, 9, 15> orientation_jacobian() {
  Eigen::Matrix<double, 9, 15> H = Eigen::Matrix<double, 9, 15>::Zero();
  for (int i = 0; i < 3; ++i) {
    H.block<3, 3>(3 * i, kRotBlock) = -skew(Vec3::Unit(i));
  }
  return H;
}

Measurement stack_pose_measurement(const RobotState& s, const Vec3& p_meas,
                                   const Mat3& R_meas, const Vec3& sigma_pos,
                                   const Vec3& sigma_rot) {
  Measurement m;
  m.z.resize(12);
  m.z.head<3>() = position_innovation(s, p_meas);
  m.z.tail<9>() = orientation_innovations(s, R_meas);

  m.H.setZero(12, 15);
  m.H.topRows<3>() = position_jacobian();
  m.H.bottomRows<9>() = orientation_jacobian();

  m.N.setZero(12, 12);
  m.N.topLeftCorner<3, 3>() = position_noise(s, sigma_pos);
  const Mat3 Nr = s.R.transpose() * sigma_rot.array().square().matrix().asDiagonal() * s.R;
  for (int i = 0; i < 3; ++i) {
    m.N.block<3, 3>(3 + 3 * i, 3 + 3 * i) = Nr;
  }
  return m;
}

CorrectionInfo apply_correction(RobotState& s, Covariance15& P,
                                const Measurement& m, const FilterConfig& cfg) {
  const auto k = m.z.size();
  if (m.H.rows() != k || m.H.cols() != kStateDim || m.N.rows() != k ||
      m.N.cols() != k) {
    throw std::invalid_argument("measurement dimensions disagree");
  }
  if ((m.N - m.N.transpose()).norm() > 1e-9 * std::max(m.N.norm(), 1e-300)) {
    throw std::invalid_argument("measurement noise not symmetric");
  }

  const Eigen::MatrixXd S = m.H * P * m.H.transpose() + m.N;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > cfg.cond_max) {
    throw SingularInnovation("innovation covariance cond " +
                             std::to_string(lo > 0.0 ? hi / lo : -1.0));
  }
  const Eigen::LLT<Eigen::MatrixXd> Sllt(S);

  Eigen::MatrixXd K;  // 15 x k
  if (cfg.gain_mode == GainMode::kKalman) {
    K = Sllt.solve(m.H * P).transpose();
  } else {
    // Fixed weighted least-squares gain. The normal matrix has rank equal to
    // the observed directions (< 15), so only those are inverted; velocity
    // and bias blocks receive no direct correction in this mode.
    const Eigen::MatrixXd W = m.N.ldlt().solve(m.H);  // N^-1 H
    const Eigen::MatrixXd G = m.H.transpose() * W;    // H^T N^-1 H
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(G);
    K = cod.pseudoInverse() * W.transpose();
  }

  const Vec15 delta = K * m.z;
  const Mat5 X = s.group() * se23_exp(delta.head<9>().eval());
  s = state_from_group(X, Vec3(s.bg + delta.segment<3>(kGyroBiasBlock)),
                       Vec3(s.ba + delta.segment<3>(kAccelBiasBlock)), s.t);
  if (!is_rotation(s.R)) {
    s.R = reorthonormalize(s.R);
  }

  const Mat15 IKH = Mat15::Identity() - K * m.H;
  P = IKH * P * IKH.transpose() + K * m.N * K.transpose();
  P = 0.5 * (P + P.transpose());

  CorrectionInfo info;
  info.dof = static_cast<int>(k);
  info.nis = m.z.dot(Sllt.solve(m.z));
  return info;
}

}  // namespace inekf
