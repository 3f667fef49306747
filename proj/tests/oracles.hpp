#pragma once

// Independent reference implementations used only by tests. Everything here
// is deliberately naive: truncated series instead of closed forms, ECEF
// round-trips instead of tangent-plane algebra, Gaussian elimination ranks.
// Slow and obvious beats fast and clever on this side of the assertions.

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "inekf/lie.hpp"

namespace oracle {

// Truncated matrix exponential; 30 terms is plenty below ||A|| ~ pi.
template <typename Mat>
Mat expm_series(const Mat& a, int terms = 30) {
  Mat sum = Mat::Identity(a.rows(), a.cols());
  Mat term = Mat::Identity(a.rows(), a.cols());
  for (int k = 1; k <= terms; ++k) {
    term = (term * a / static_cast<double>(k)).eval();
    sum += term;
  }
  return sum;
}

// Rank via column-pivoted QR at a fixed absolute threshold.
inline int rank_of(const Eigen::MatrixXd& m, double tol = 1e-10) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(tol);
  return static_cast<int>(qr.rank());
}

// WGS-84 geodetic <-> ECEF, the textbook closed forms. The ENU oracle goes
// through ECEF and rotates into the tangent frame at the origin, so it shares
// no code path with the radii-of-curvature implementation under test.
constexpr double kA = 6378137.0;
constexpr double kF = 1.0 / 298.257223563;
constexpr double kE2 = kF * (2.0 - kF);

inline Eigen::Vector3d geodetic_to_ecef(double lat_deg, double lon_deg,
                                        double alt_m) {
  const double lat = lat_deg * M_PI / 180.0;
  const double lon = lon_deg * M_PI / 180.0;
  const double n = kA / std::sqrt(1.0 - kE2 * std::sin(lat) * std::sin(lat));
  return {(n + alt_m) * std::cos(lat) * std::cos(lon),
          (n + alt_m) * std::cos(lat) * std::sin(lon),
          (n * (1.0 - kE2) + alt_m) * std::sin(lat)};
}

inline Eigen::Vector3d enu_via_ecef(double lat_deg, double lon_deg,
                                    double alt_m, double lat0_deg,
                                    double lon0_deg, double alt0_m) {
  const Eigen::Vector3d d =
      geodetic_to_ecef(lat_deg, lon_deg, alt_m) -
      geodetic_to_ecef(lat0_deg, lon0_deg, alt0_m);
  const double lat = lat0_deg * M_PI / 180.0;
  const double lon = lon0_deg * M_PI / 180.0;
  Eigen::Matrix3d r;
  r << -std::sin(lon), std::cos(lon), 0.0,
      -std::sin(lat) * std::cos(lon), -std::sin(lat) * std::sin(lon), std::cos(lat),
      std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat);
  return r * d;
}

// Deterministic random generators shared by the property tests.
inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0xC0FFEE);
  return gen;
}

inline Eigen::Vector3d random_vec3(double scale = 1.0) {
  std::normal_distribution<double> n01;
  return scale * Eigen::Vector3d(n01(rng()), n01(rng()), n01(rng()));
}

// Uniform direction, length bounded away from the pi branch cut.
inline Eigen::Vector3d random_axis_angle(double max_angle = M_PI - 1e-3) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::Vector3d v = random_vec3();
  while (v.norm() < 1e-6) v = random_vec3();
  return (u(rng()) * max_angle) * v.normalized();
}

inline Eigen::Matrix3d random_rotation() {
  return inekf::so3_exp(random_axis_angle());
}

}  // namespace oracle
