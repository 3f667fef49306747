#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "inekf/config.hpp"
#include "inekf/correction.hpp"
#include "inekf/heading.hpp"
#include "inekf/propagation.hpp"
#include "inekf/state.hpp"

namespace inekf {

// Run bookkeeping; fixes_read == fixes_used + fixes_dropped always holds.
struct RunCounters {
  std::size_t imu_samples = 0;
  std::size_t fixes_read = 0;
  std::size_t fixes_used = 0;
  std::size_t fixes_dropped = 0;
  std::size_t heading_refs = 0;
};

// Worst covariance conditioning seen across all steps of a run. Asymmetry is
// relative Frobenius (see covariance_asymmetry); eig ratio is lambda_min over
// lambda_max, negative when P has lost positive semidefiniteness.
struct CovarianceAudit {
  std::size_t steps = 0;
  double max_asymmetry = 0.0;
  double min_eig_ratio = std::numeric_limits<double>::infinity();
};

// One course-over-ground attempt per fix pair, for the debug stream.
struct HeadingDebugRow {
  double t = 0.0;
  double yaw_cog_deg = 0.0;
  double speed = 0.0;
  bool valid = false;
};

// Normalized innovation squared of one correction (dof 3 position-only,
// dof 12 stacked pose).
struct NisSample {
  double t = 0.0;
  double nis = 0.0;
  int dof = 0;
};

struct RunResult {
  Trajectory estimate;  // one snapshot per IMU step, plus the initial state
  RobotState final_state;
  Covariance15 final_covariance = Covariance15::Zero();
  RunCounters counters;
  CovarianceAudit audit;
  std::vector<NisSample> nis;
  std::vector<HeadingDebugRow> heading_debug;
  std::vector<std::string> warnings;
};

// Single-pass fusion of an IMU stream with ENU position fixes.
//
// Merge policy: all IMU samples with t <= fix time are processed before the
// fix is applied; a fix sharing a timestamp with an IMU sample is applied
// right after that sample. Fixes older than the filter time by more than one
// IMU period (and trailing fixes further than one period past the last
// sample) are dropped and counted, never retro-fused.
//
// The filter starts one nominal IMU period before the first sample, at the
// configured initial position/yaw. Each accepted fix feeds the heading
// generator; when a reference comes back the fix is fused as a stacked pose
// measurement, otherwise position-only. heading_mode picks the orientation
// source: the filter's own roll/pitch under the course yaw (cog_composed) or
// a raw-gyro dead-reckoned attitude (imu_raw).
//
// Throws std::invalid_argument on fewer than two IMU samples and
// DivergenceError if the state or covariance goes non-finite. audit enables
// the per-step covariance health scan (eigenvalue check is O(15^3) per step).
RunResult run_filter(const std::vector<ImuSample>& imu,
                     const std::vector<PositionFixEnu>& fixes,
                     const FilterConfig& cfg, bool audit = false);

struct GeodeticRunResult {
  RunResult run;
  EnuOrigin origin;
  bool origin_set = false;
  // Accepted fixes as a position-only track (identity rotation), for
  // GPS-only baselines and inter-track comparison.
  Trajectory gps_track;
};

// Anchors the ENU origin at the first fix in the stream, converts all fixes
// to the tangent plane, and runs the filter.
GeodeticRunResult run_filter_geodetic(const std::vector<ImuSample>& imu,
                                      const std::vector<GpsFix>& fixes,
                                      const FilterConfig& cfg,
                                      bool audit = false);

}  // namespace inekf
