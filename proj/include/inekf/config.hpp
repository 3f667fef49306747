#pragma once

#include <cstdint>

#include "inekf/lie.hpp"

namespace inekf {

// Continuous-time noise densities: white noise in unit/sqrt(Hz), bias random
// walks in unit/s/sqrt(Hz). Per-axis vectors; scalars broadcast.
struct NoiseParams {
  Vec3 gyro = Vec3::Constant(2e-3);         // rad/s/sqrt(Hz)
  Vec3 accel = Vec3::Constant(2e-2);        // m/s^2/sqrt(Hz)
  Vec3 gyro_bias = Vec3::Constant(1e-5);    // rad/s^2/sqrt(Hz)
  Vec3 accel_bias = Vec3::Constant(1e-4);   // m/s^3/sqrt(Hz)

  NoiseParams() = default;
  NoiseParams(double g, double a, double gb, double ab)
      : gyro(Vec3::Constant(g)),
        accel(Vec3::Constant(a)),
        gyro_bias(Vec3::Constant(gb)),
        accel_bias(Vec3::Constant(ab)) {}
};

// One-sigma values for the initial covariance diagonal.
struct InitialSigmas {
  Vec3 orientation = Vec3::Constant(0.01);  // rad
  Vec3 velocity = Vec3::Constant(0.1);      // m/s
  Vec3 position = Vec3::Constant(1.0);      // m
  Vec3 gyro_bias = Vec3::Constant(0.01);    // rad/s
  Vec3 accel_bias = Vec3::Constant(0.01);   // m/s^2
};

enum class GainMode { kKalman, kWls };

enum class HeadingMode { kCogComposed, kImuRaw };

struct FilterConfig {
  NoiseParams noise;
  InitialSigmas initial_sigma;
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);

  // kKalman weighs innovations by P; kWls applies the fixed weighted
  // least-squares gain (H^T N^-1 H)^+ H^T N^-1 instead.
  GainMode gain_mode = GainMode::kKalman;

  // kCogComposed fuses course-over-ground yaw with estimated roll/pitch into
  // a full orientation reference; kImuRaw feeds a gyro-dead-reckoned
  // orientation and leaves yaw to be corrected through position coupling.
  HeadingMode heading_mode = HeadingMode::kCogComposed;

  // Course over ground is only trusted at or above this speed.
  double v_min = 0.3;  // m/s

  // Model error of COG yaw (sideslip, antenna offset) at v_min; scaled by
  // v_min/speed. GPS-noise-induced COG error is added on top of this.
  double cog_yaw_sigma_deg = 5.0;

  // Two fixes further apart than this produce no heading reference.
  double max_pair_gap_s = 2.0;

  // Accelerometer convention: true means a_m is specific force (reads -g at
  // rest); false means a_m is coordinate acceleration (reads 0 at rest).
  bool imu_includes_gravity = true;

  double max_imu_dt_s = 0.1;

  // Innovation covariance condition number above which the update aborts.
  double cond_max = 1e12;

  Vec3 init_position = Vec3::Zero();
  double init_yaw_deg = 0.0;

  uint64_t seed = 0;
};

}  // namespace inekf
