#pragma once

#include <cstdint>
#include <vector>

#include "inekf/config.hpp"
#include "inekf/correction.hpp"
#include "inekf/heading.hpp"
#include "inekf/propagation.hpp"
#include "inekf/state.hpp"

namespace inekf {

enum class TrajectoryKind { kLine, kCircle, kFigureEight, kWaypointPolyline };

struct Scenario {
  TrajectoryKind kind = TrajectoryKind::kFigureEight;
  double duration_s = 300.0;
  double speed_mps = 2.0;
  double imu_rate_hz = 200.0;
  double gps_rate_hz = 5.0;

  double radius_m = 20.0;  // circle
  double scale_m = 40.0;   // figure-eight half-extent along x

  // Polyline: straight legs at speed_mps joined by in-place turns.
  std::vector<Eigen::Vector2d> waypoints;
  double turn_rate_rps = 0.5;

  NoiseParams imu_noise{0.0, 0.0, 0.0, 0.0};
  Vec3 gyro_bias0 = Vec3::Zero();   // constant initial bias, rad/s
  Vec3 accel_bias0 = Vec3::Zero();  // constant initial bias, m/s^2
  Vec3 gps_sigma_enu = Vec3::Zero();
  double gps_delay_s = 0.0;

  EnuOrigin origin{42.2936, -83.7128, 256.0};
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);
  uint64_t seed = 1;
};

// Analytic ground truth sampled at the IMU rate. Planar surface motion: yaw
// follows the path tangent, roll and pitch stay zero.
Trajectory generate_truth(const Scenario& sc);

// The analytic pose generate_truth samples, at an arbitrary time.
StateSnapshot sample_path(const Scenario& sc, double t);

// Loop time of the closed paths (circle, figure-eight); zero otherwise.
double path_period(const Scenario& sc);

// Ideal rate-integrating IMU: each sample at t_k carries the average body
// rates over (t_{k-1}, t_k], recovered exactly from the truth increments, so
// the strapdown update reproduces truth to integration error. White noise is
// scaled by sqrt(rate); biases start at the configured constants and random
// walk. Accelerometer outputs specific force.
std::vector<ImuSample> synthesize_imu(const Trajectory& truth,
                                      const NoiseParams& noise,
                                      const Vec3& gyro_bias0,
                                      const Vec3& accel_bias0,
                                      const Vec3& gravity, uint64_t seed);

// Truth positions downsampled to the GPS rate with N(0, sigma^2) per-axis
// ENU noise; emitted either as ENU fixes or as geodetic rows around origin.
std::vector<PositionFixEnu> synthesize_gps_enu(const Trajectory& truth,
                                               const Vec3& sigma_enu,
                                               double gps_rate_hz,
                                               uint64_t seed,
                                               double delay_s = 0.0);
std::vector<GpsFix> synthesize_gps(const Trajectory& truth, const Vec3& sigma_enu,
                                   double gps_rate_hz, const EnuOrigin& origin,
                                   uint64_t seed, double delay_s = 0.0);

}  // namespace inekf
