#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/SVD>

// Lie group operations for SO(3) and SE2(3), the "double direct spatial
// isometry" group whose elements carry (R, v, p) in a 5x5 homogeneous block.
// All maps are closed-form; small angles fall back to truncated series.

namespace inekf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec15 = Eigen::Matrix<double, 15, 1>;
using Mat15 = Eigen::Matrix<double, 15, 15>;

// Tangent-vector component layout used by the whole filter:
// (rotation, velocity, position, gyro bias, accel bias), three each.
inline constexpr int kRotBlock = 0;
inline constexpr int kVelBlock = 3;
inline constexpr int kPosBlock = 6;
inline constexpr int kGyroBiasBlock = 9;
inline constexpr int kAccelBiasBlock = 12;
inline constexpr int kStateDim = 15;

// Below this rotation angle exp/log/Jacobian formulas switch to series.
inline constexpr double kSmallAngle = 1e-7;

template <typename D>
Eigen::Matrix<typename D::Scalar, 3, 3> skew(const Eigen::MatrixBase<D>& v) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(D, 3);
  using S = typename D::Scalar;
  Eigen::Matrix<S, 3, 3> m;
  m << S(0), -v(2), v(1),
       v(2), S(0), -v(0),
       -v(1), v(0), S(0);
  return m;
}

template <typename D>
Eigen::Matrix<typename D::Scalar, 3, 1> unskew(const Eigen::MatrixBase<D>& m) {
  EIGEN_STATIC_ASSERT_MATRIX_SPECIFIC_SIZE(D, 3, 3);
  return Eigen::Matrix<typename D::Scalar, 3, 1>(m(2, 1), m(0, 2), m(1, 0));
}

template <typename D>
Eigen::Matrix<typename D::Scalar, 3, 3> so3_exp(const Eigen::MatrixBase<D>& w) {
  using S = typename D::Scalar;
  using M = Eigen::Matrix<S, 3, 3>;
  const S theta2 = w.squaredNorm();
  const S theta = std::sqrt(theta2);
  const M K = skew(w);
  if (theta < S(kSmallAngle)) {
    return M::Identity() + K + S(0.5) * K * K;
  }
  // 2*sin^2(theta/2) avoids the 1-cos cancellation near zero.
  const S s_half = std::sin(S(0.5) * theta);
  const S a = std::sin(theta) / theta;
  const S b = S(2) * s_half * s_half / theta2;
  return M::Identity() + a * K + b * K * K;
}

// Rotation vector of R with angle in [0, pi]. At exactly pi the axis sign is
// arbitrary; either choice satisfies so3_exp(so3_log(R)) == R.
template <typename D>
Eigen::Matrix<typename D::Scalar, 3, 1> so3_log(const Eigen::MatrixBase<D>& Rin) {
  using S = typename D::Scalar;
  using M = Eigen::Matrix<S, 3, 3>;
  using V = Eigen::Matrix<S, 3, 1>;
  const M R = Rin;
  const S cos_theta = std::clamp((R.trace() - S(1)) / S(2), S(-1), S(1));
  const V w = unskew((S(0.5) * (R - R.transpose())).eval());  // sin(theta) * axis
  const S sin_theta = w.norm();
  const S theta = std::atan2(sin_theta, cos_theta);
  if (theta < S(kSmallAngle)) return w;
  if (cos_theta > S(-0.999)) return (theta / sin_theta) * w;
  // Near pi the skew part degenerates; recover the axis from the symmetric
  // part, which stays well conditioned, and fix the sign against w.
  const M vvt = (S(0.5) * (R + R.transpose()) - cos_theta * M::Identity()) / (S(1) - cos_theta);
  int j = 0;
  vvt.diagonal().maxCoeff(&j);
  V axis = vvt.col(j) / std::sqrt(vvt(j, j));
  if (axis.dot(w) < S(0)) axis = -axis;
  return theta * axis;
}

template <typename D>
Eigen::Matrix<typename D::Scalar, 3, 3> so3_left_jacobian(const Eigen::MatrixBase<D>& w) {
  using S = typename D::Scalar;
  using M = Eigen::Matrix<S, 3, 3>;
  const S theta2 = w.squaredNorm();
  const S theta = std::sqrt(theta2);
  const M K = skew(w);
  if (theta < S(kSmallAngle)) {
    return M::Identity() + S(0.5) * K + K * K / S(6);
  }
  const S s_half = std::sin(S(0.5) * theta);
  const S a = S(2) * s_half * s_half / theta2;
  const S b = (theta - std::sin(theta)) / (theta2 * theta);
  return M::Identity() + a * K + b * K * K;
}

template <typename D>
Eigen::Matrix<typename D::Scalar, 3, 3> so3_left_jacobian_inv(const Eigen::MatrixBase<D>& w) {
  using S = typename D::Scalar;
  using M = Eigen::Matrix<S, 3, 3>;
  const S theta2 = w.squaredNorm();
  const S theta = std::sqrt(theta2);
  const M K = skew(w);
  // The closed-form coefficient 1/t^2 - cot(t/2)/(2t) cancels badly below
  // ~1e-2, so the series window here is wider than kSmallAngle.
  if (theta < S(1e-2)) {
    const S c = S(1) / S(12) + theta2 / S(720);
    return M::Identity() - S(0.5) * K + c * K * K;
  }
  const S half = S(0.5) * theta;
  const S c = S(1) / theta2 - std::cos(half) / (S(2) * theta * std::sin(half));
  return M::Identity() - S(0.5) * K + c * K * K;
}

// hat: R^9 -> se2(3), layout (rotation, velocity, position).
template <typename D>
Eigen::Matrix<typename D::Scalar, 5, 5> se23_hat(const Eigen::MatrixBase<D>& xi) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(D, 9);
  using S = typename D::Scalar;
  Eigen::Matrix<S, 5, 5> m = Eigen::Matrix<S, 5, 5>::Zero();
  m.template topLeftCorner<3, 3>() = skew(xi.template head<3>());
  m.template block<3, 1>(0, 3) = xi.template segment<3>(3);
  m.template block<3, 1>(0, 4) = xi.template tail<3>();
  return m;
}

template <typename D>
Eigen::Matrix<typename D::Scalar, 9, 1> se23_vee(const Eigen::MatrixBase<D>& m) {
  EIGEN_STATIC_ASSERT_MATRIX_SPECIFIC_SIZE(D, 5, 5);
  Eigen::Matrix<typename D::Scalar, 9, 1> xi;
  xi.template head<3>() = unskew(m.template topLeftCorner<3, 3>());
  xi.template segment<3>(3) = m.template block<3, 1>(0, 3);
  xi.template tail<3>() = m.template block<3, 1>(0, 4);
  return xi;
}

template <typename D>
Eigen::Matrix<typename D::Scalar, 5, 5> se23_exp(const Eigen::MatrixBase<D>& xi) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(D, 9);
  using S = typename D::Scalar;
  const Eigen::Matrix<S, 3, 1> w = xi.template head<3>();
  const Eigen::Matrix<S, 3, 3> J = so3_left_jacobian(w);
  Eigen::Matrix<S, 5, 5> X = Eigen::Matrix<S, 5, 5>::Identity();
  X.template topLeftCorner<3, 3>() = so3_exp(w);
  X.template block<3, 1>(0, 3) = J * xi.template segment<3>(3);
  X.template block<3, 1>(0, 4) = J * xi.template tail<3>();
  return X;
}

template <typename D>
Eigen::Matrix<typename D::Scalar, 9, 1> se23_log(const Eigen::MatrixBase<D>& X) {
  EIGEN_STATIC_ASSERT_MATRIX_SPECIFIC_SIZE(D, 5, 5);
  using S = typename D::Scalar;
  const Eigen::Matrix<S, 3, 1> w = so3_log(X.template topLeftCorner<3, 3>());
  const Eigen::Matrix<S, 3, 3> Jinv = so3_left_jacobian_inv(w);
  Eigen::Matrix<S, 9, 1> xi;
  xi.template head<3>() = w;
  xi.template segment<3>(3) = Jinv * X.template block<3, 1>(0, 3);
  xi.template tail<3>() = Jinv * X.template block<3, 1>(0, 4);
  return xi;
}

// Closed-form group inverse: (R, v, p)^-1 = (R', -R'v, -R'p) with R' = R^T.
template <typename D>
Eigen::Matrix<typename D::Scalar, 5, 5> se23_inverse(const Eigen::MatrixBase<D>& X) {
  EIGEN_STATIC_ASSERT_MATRIX_SPECIFIC_SIZE(D, 5, 5);
  using S = typename D::Scalar;
  const Eigen::Matrix<S, 3, 3> Rt = X.template topLeftCorner<3, 3>().transpose();
  Eigen::Matrix<S, 5, 5> Xi = Eigen::Matrix<S, 5, 5>::Identity();
  Xi.template topLeftCorner<3, 3>() = Rt;
  Xi.template block<3, 1>(0, 3) = -Rt * X.template block<3, 1>(0, 3);
  Xi.template block<3, 1>(0, 4) = -Rt * X.template block<3, 1>(0, 4);
  return Xi;
}

// Adjoint on the 9-dim tangent: Ad_X xi = (X hat(xi) X^-1)^vee.
template <typename D>
Eigen::Matrix<typename D::Scalar, 9, 9> se23_adjoint(const Eigen::MatrixBase<D>& X) {
  EIGEN_STATIC_ASSERT_MATRIX_SPECIFIC_SIZE(D, 5, 5);
  using S = typename D::Scalar;
  const Eigen::Matrix<S, 3, 3> R = X.template topLeftCorner<3, 3>();
  Eigen::Matrix<S, 9, 9> ad = Eigen::Matrix<S, 9, 9>::Zero();
  ad.template block<3, 3>(0, 0) = R;
  ad.template block<3, 3>(3, 3) = R;
  ad.template block<3, 3>(6, 6) = R;
  ad.template block<3, 3>(3, 0) = skew(X.template block<3, 1>(0, 3)) * R;
  ad.template block<3, 3>(6, 0) = skew(X.template block<3, 1>(0, 4)) * R;
  return ad;
}

inline bool is_rotation(const Mat3& R, double tol = 1e-9) {
  return (R.transpose() * R - Mat3::Identity()).norm() <= tol &&
         std::abs(R.determinant() - 1.0) <= tol;
}

// Projects a drifted rotation estimate back onto SO(3) via the polar factor.
inline Mat3 reorthonormalize(const Mat3& R) {
  Eigen::JacobiSVD<Mat3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 out = svd.matrixU() * svd.matrixV().transpose();
  if (out.determinant() < 0.0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    out = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return out;
}

inline Mat3 rot_x(double a) {
  Mat3 m;
  m << 1, 0, 0,
       0, std::cos(a), -std::sin(a),
       0, std::sin(a), std::cos(a);
  return m;
}

inline Mat3 rot_y(double a) {
  Mat3 m;
  m << std::cos(a), 0, std::sin(a),
       0, 1, 0,
       -std::sin(a), 0, std::cos(a);
  return m;
}

inline Mat3 rot_z(double a) {
  Mat3 m;
  m << std::cos(a), -std::sin(a), 0,
       std::sin(a), std::cos(a), 0,
       0, 0, 1;
  return m;
}

// ZYX convention: R = Rz(yaw) * Ry(pitch) * Rx(roll).
inline Mat3 rotation_from_rpy(double roll, double pitch, double yaw) {
  return rot_z(yaw) * rot_y(pitch) * rot_x(roll);
}

inline Vec3 rpy_from_rotation(const Mat3& R) {
  const double pitch = -std::asin(std::clamp(R(2, 0), -1.0, 1.0));
  const double roll = std::atan2(R(2, 1), R(2, 2));
  const double yaw = std::atan2(R(1, 0), R(0, 0));
  return Vec3(roll, pitch, yaw);
}

inline double yaw_of(const Mat3& R) { return std::atan2(R(1, 0), R(0, 0)); }

// Wraps to (-pi, pi]; exact under shifts by the floating-point 2*pi.
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * M_PI);
  if (w <= -M_PI) w += 2.0 * M_PI;
  return w;
}

inline constexpr double deg2rad(double d) { return d * M_PI / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / M_PI; }

}  // namespace inekf
