#include "inekf/state.hpp"

#include <Eigen/Eigenvalues>

namespace inekf {

Mat5 RobotState::group() const {
  Mat5 X = Mat5::Identity();
  X.topLeftCorner<3, 3>() = R;
  X.block<3, 1>(0, 3) = v;
  X.block<3, 1>(0, 4) = p;
  return X;
}

bool RobotState::finite() const {
  return R.allFinite() && v.allFinite() && p.allFinite() && bg.allFinite() &&
         ba.allFinite() && std::isfinite(t);
}

RobotState state_from_group(const Mat5& X, const Vec3& bg, const Vec3& ba, double t) {
  RobotState s;
  s.R = X.topLeftCorner<3, 3>();
  s.v = X.block<3, 1>(0, 3);
  s.p = X.block<3, 1>(0, 4);
  s.bg = bg;
  s.ba = ba;
  s.t = t;
  return s;
}

std::pair<RobotState, Covariance15> initial_state(const Vec3& p0, double yaw,
                                                  const FilterConfig& cfg) {
  RobotState s;
  s.R = rot_z(yaw);
  s.p = p0;

  Vec15 d;
  d.segment<3>(kRotBlock) = cfg.initial_sigma.orientation;
  d.segment<3>(kVelBlock) = cfg.initial_sigma.velocity;
  d.segment<3>(kPosBlock) = cfg.initial_sigma.position;
  d.segment<3>(kGyroBiasBlock) = cfg.initial_sigma.gyro_bias;
  d.segment<3>(kAccelBiasBlock) = cfg.initial_sigma.accel_bias;

  Covariance15 P = d.array().square().matrix().asDiagonal();
  return {s, P};
}

double covariance_asymmetry(const Covariance15& P) {
  const double scale = std::max(P.norm(), 1e-300);
  return (P - P.transpose()).norm() / scale;
}

bool covariance_is_symmetric(const Covariance15& P, double rel_tol) {
  return covariance_asymmetry(P) <= rel_tol;
}

double covariance_min_eig_ratio(const Covariance15& P) {
  Eigen::SelfAdjointEigenSolver<Mat15> eig(P, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = std::max(eig.eigenvalues().maxCoeff(), 1e-300);
  return lo / hi;
}

}  // namespace inekf
