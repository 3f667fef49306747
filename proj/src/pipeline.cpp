#include "inekf/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "inekf/errors.hpp"

namespace inekf {
namespace {

void audit_step(CovarianceAudit& a, const Covariance15& P, bool enabled) {
  if (!enabled) return;
  ++a.steps;
  a.max_asymmetry = std::max(a.max_asymmetry, covariance_asymmetry(P));
  a.min_eig_ratio = std::min(a.min_eig_ratio, covariance_min_eig_ratio(P));
}

void check_finite(const RobotState& s, const Covariance15& P) {
  if (!s.finite() || !P.allFinite()) {
    throw DivergenceError("non-finite state at t=" + std::to_string(s.t));
  }
}

}  // namespace

RunResult run_filter(const std::vector<ImuSample>& imu,
                     const std::vector<PositionFixEnu>& fixes,
                     const FilterConfig& cfg, bool audit) {
  if (imu.size() < 2) {
    throw std::invalid_argument("run_filter: need at least two IMU samples");
  }

  RunResult out;
  out.counters.fixes_read = fixes.size();
  if (fixes.empty()) {
    out.warnings.push_back("no GPS fixes: pure dead reckoning");
  }

  const double nominal_dt = imu[1].t - imu[0].t;
  auto [s, P] = initial_state(cfg.init_position, deg2rad(cfg.init_yaw_deg), cfg);
  s.t = imu[0].t - nominal_dt;

  HeadingGenerator heading(cfg);
  Mat3 R_dr = s.R;  // raw-gyro dead reckoning, the imu_raw orientation source
  double period = nominal_dt;  // latest IMU spacing, staleness yardstick

  auto apply_fix = [&](const PositionFixEnu& fix) {
    if (s.t - fix.t > period + 1e-9) {
      ++out.counters.fixes_dropped;
      return;
    }
    const Mat3& R_src = cfg.heading_mode == HeadingMode::kImuRaw ? R_dr : s.R;
    const auto ref = heading.feed(fix.t, fix.p, fix.sigma, R_src);
    const CogResult& cog = heading.last_cog();
    out.heading_debug.push_back({fix.t, rad2deg(cog.yaw), cog.speed, cog.valid});

    CorrectionInfo info;
    if (ref) {
      ++out.counters.heading_refs;
      // imu_raw feeds the dead-reckoned attitude itself (yaw included) at a
      // fixed noise; cog_composed uses the course-derived reference with its
      // per-pair sigma. Same cadence either way, so the modes A/B cleanly.
      const bool raw = cfg.heading_mode == HeadingMode::kImuRaw;
      const Mat3& R_meas = raw ? R_dr : ref->R;
      const Vec3 sigma_rot = Vec3::Constant(
          raw ? deg2rad(cfg.cog_yaw_sigma_deg) : ref->yaw_sigma);
      info = apply_correction(
          s, P, stack_pose_measurement(s, fix.p, R_meas, fix.sigma, sigma_rot),
          cfg);
    } else {
      info = apply_correction(s, P,
                              make_position_measurement(s, fix.p, fix.sigma),
                              cfg);
    }
    ++out.counters.fixes_used;
    out.nis.push_back({fix.t, info.nis, info.dof});
    check_finite(s, P);
    audit_step(out.audit, P, audit);
  };

  out.estimate.reserve(imu.size() + 1);
  out.estimate.push_back(StateSnapshot(s));

  std::size_t j = 0;
  for (const auto& u : imu) {
    while (j < fixes.size() && fixes[j].t < u.t) apply_fix(fixes[j++]);

    const double dt = u.t - s.t;
    propagate(s, P, u, dt, cfg);
    R_dr = R_dr * so3_exp(Vec3(u.gyro * dt));
    period = dt;
    ++out.counters.imu_samples;
    check_finite(s, P);
    audit_step(out.audit, P, audit);

    while (j < fixes.size() && fixes[j].t <= s.t) apply_fix(fixes[j++]);

    out.estimate.push_back(StateSnapshot(s));
  }

  // Trailing fixes have no IMU sample to ride on; fuse the ones within a
  // period of the final state and refresh its snapshot, drop the rest.
  bool trailing = false;
  for (; j < fixes.size(); ++j) {
    if (fixes[j].t - s.t > period + 1e-9) {
      ++out.counters.fixes_dropped;
    } else {
      apply_fix(fixes[j]);
      trailing = true;
    }
  }
  if (trailing) out.estimate.back() = StateSnapshot(s);

  out.final_state = s;
  out.final_covariance = P;
  return out;
}

GeodeticRunResult run_filter_geodetic(const std::vector<ImuSample>& imu,
                                      const std::vector<GpsFix>& fixes,
                                      const FilterConfig& cfg, bool audit) {
  GeodeticRunResult out;
  std::vector<PositionFixEnu> enu;
  enu.reserve(fixes.size());
  if (!fixes.empty()) {
    out.origin = {fixes.front().lat_deg, fixes.front().lon_deg,
                  fixes.front().alt_m};
    out.origin_set = true;
    out.gps_track.reserve(fixes.size());
    for (const auto& f : fixes) {
      PositionFixEnu e;
      e.t = f.t;
      e.p = geodetic_to_enu(f, out.origin);
      e.sigma = f.sigma_enu;
      enu.push_back(e);

      StateSnapshot snap;
      snap.t = f.t;
      snap.p = e.p;
      out.gps_track.push_back(snap);
    }
  }
  out.run = run_filter(imu, enu, cfg, audit);
  return out;
}

}  // namespace inekf
