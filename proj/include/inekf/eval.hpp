#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "inekf/state.hpp"

namespace inekf {

struct ErrorSample {
  double t = 0.0;
  double pos_err_m = 0.0;
  double heading_err_deg = 0.0;
};

struct ErrorReport {
  double pos_rmse = 0.0;
  double pos_max = 0.0;
  double heading_rmse_deg = 0.0;
  double heading_max_deg = 0.0;
  size_t n_samples = 0;
  bool has_heading = true;
  std::vector<ErrorSample> series;
};

// Interpolates the reference track to the estimate timestamps (linear in
// position, geodesic in rotation) and scores 3D position error plus heading
// error, the yaw of R_ref^T R_est wrapped to [-180, 180] deg. Estimate
// samples outside the reference span are skipped; throws NoOverlap when
// nothing remains. score_heading=false skips heading metrics (position-only
// references such as raw GPS tracks).
ErrorReport align_and_score(const Trajectory& est, const Trajectory& ref,
                            bool score_heading = true);

struct Comparison {
  std::vector<std::string> labels;
  std::vector<ErrorReport> reports;
};

Comparison compare_runs(const std::vector<ErrorReport>& reports,
                        const std::vector<std::string>& labels);

// Fixed-width text table, metrics as rows and runs as columns.
std::string render_table(const Comparison& cmp);

nlohmann::json report_to_json(const ErrorReport& r);
nlohmann::json comparison_to_json(const Comparison& cmp);

}  // namespace inekf
