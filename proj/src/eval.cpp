#include "inekf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "inekf/errors.hpp"
#include "inekf/lie.hpp"

namespace inekf {
namespace {

Mat3 slerp(const Mat3& R0, const Mat3& R1, double alpha) {
  return R0 * so3_exp((alpha * so3_log((R0.transpose() * R1).eval())).eval());
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

ErrorReport align_and_score(const Trajectory& est, const Trajectory& ref,
                            bool score_heading) {
  if (ref.size() < 2) {
    throw std::invalid_argument("reference track needs at least 2 samples");
  }
  ErrorReport rep;
  rep.has_heading = score_heading;
  double pos_sq = 0.0, head_sq = 0.0;

  size_t hi = 1;
  for (const auto& e : est) {
    if (e.t < ref.front().t || e.t > ref.back().t) continue;
    while (hi + 1 < ref.size() && ref[hi].t < e.t) ++hi;
    const StateSnapshot& r0 = ref[hi - 1];
    const StateSnapshot& r1 = ref[hi];
    const double alpha =
        std::clamp((e.t - r0.t) / std::max(r1.t - r0.t, 1e-300), 0.0, 1.0);

    const Vec3 p_ref = r0.p + alpha * (r1.p - r0.p);
    ErrorSample sample;
    sample.t = e.t;
    sample.pos_err_m = (e.p - p_ref).norm();
    pos_sq += sample.pos_err_m * sample.pos_err_m;
    rep.pos_max = std::max(rep.pos_max, sample.pos_err_m);

    if (score_heading) {
      const Mat3 R_ref = slerp(r0.R, r1.R, alpha);
      const double err = wrap_angle(yaw_of(Mat3(R_ref.transpose() * e.R)));
      sample.heading_err_deg = rad2deg(err);
      head_sq += sample.heading_err_deg * sample.heading_err_deg;
      rep.heading_max_deg =
          std::max(rep.heading_max_deg, std::abs(sample.heading_err_deg));
    }
    rep.series.push_back(sample);
  }

  rep.n_samples = rep.series.size();
  if (rep.n_samples == 0) {
    throw NoOverlap("estimate and reference tracks share no time span");
  }
  rep.pos_rmse = std::sqrt(pos_sq / rep.n_samples);
  if (score_heading) {
    rep.heading_rmse_deg = std::sqrt(head_sq / rep.n_samples);
  }
  return rep;
}

Comparison compare_runs(const std::vector<ErrorReport>& reports,
                        const std::vector<std::string>& labels) {
  if (reports.size() != labels.size() || reports.empty()) {
    throw std::invalid_argument("compare_runs needs one label per report");
  }
  return Comparison{labels, reports};
}

std::string render_table(const Comparison& cmp) {
  const std::vector<std::string> metric_names = {
      "position RMSE [m]", "position max [m]", "heading RMSE [deg]",
      "heading max [deg]"};

  std::vector<std::vector<std::string>> cells(cmp.reports.size());
  for (size_t i = 0; i < cmp.reports.size(); ++i) {
    const ErrorReport& r = cmp.reports[i];
    cells[i] = {fmt(r.pos_rmse), fmt(r.pos_max),
                r.has_heading ? fmt(r.heading_rmse_deg) : std::string("-"),
                r.has_heading ? fmt(r.heading_max_deg) : std::string("-")};
  }

  size_t name_w = 0;
  for (const auto& n : metric_names) name_w = std::max(name_w, n.size());
  std::vector<size_t> col_w(cmp.labels.size());
  for (size_t i = 0; i < cmp.labels.size(); ++i) {
    col_w[i] = cmp.labels[i].size();
    for (const auto& row : cells[i]) col_w[i] = std::max(col_w[i], row.size());
  }

  std::string out;
  out += std::string(name_w, ' ');
  for (size_t i = 0; i < cmp.labels.size(); ++i) {
    out += "  " + std::string(col_w[i] - cmp.labels[i].size(), ' ') + cmp.labels[i];
  }
  out += "\n";
  for (size_t mrow = 0; mrow < metric_names.size(); ++mrow) {
    out += metric_names[mrow] + std::string(name_w - metric_names[mrow].size(), ' ');
    for (size_t i = 0; i < cmp.reports.size(); ++i) {
      out += "  " + std::string(col_w[i] - cells[i][mrow].size(), ' ') + cells[i][mrow];
    }
    out += "\n";
  }
  return out;
}

nlohmann::json report_to_json(const ErrorReport& r) {
  nlohmann::json j;
  j["pos_rmse_m"] = r.pos_rmse;
  j["pos_max_m"] = r.pos_max;
  if (r.has_heading) {
    j["heading_rmse_deg"] = r.heading_rmse_deg;
    j["heading_max_deg"] = r.heading_max_deg;
  }
  j["n_samples"] = r.n_samples;
  return j;
}

nlohmann::json comparison_to_json(const Comparison& cmp) {
  nlohmann::json j = nlohmann::json::object();
  for (size_t i = 0; i < cmp.labels.size(); ++i) {
    j[cmp.labels[i]] = report_to_json(cmp.reports[i]);
  }
  return j;
}

}  // namespace inekf
