#include "inekf/sim.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace inekf {
namespace {

struct PoseSample {
  Mat3 R;
  Vec3 v;
  Vec3 p;
};

double heading_of(const Eigen::Vector2d& d) { return std::atan2(d.y(), d.x()); }

// Analytic planar path evaluator; yaw is the velocity direction.
class PathModel {
 public:
  explicit PathModel(const Scenario& sc) : sc_(sc) {
    switch (sc.kind) {
      case TrajectoryKind::kFigureEight: {
        // Lissajous (A sin u, B sin 2u); period chosen so the average speed
        // equals speed_mps. Arc length by composite Simpson.
        a_ = sc.scale_m;
        b_ = 0.5 * sc.scale_m;
        const int n = 4096;
        const double h = 2.0 * M_PI / n;
        double arc = 0.0;
        for (int i = 0; i <= n; ++i) {
          const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
          arc += w * d_arc(i * h);
        }
        arc *= h / 3.0;
        period_ = arc / std::max(sc.speed_mps, 1e-9);
        break;
      }
      case TrajectoryKind::kWaypointPolyline:
        build_polyline();
        break;
      default:
        break;
    }
  }

  PoseSample pose(double t) const {
    switch (sc_.kind) {
      case TrajectoryKind::kLine: {
        PoseSample s;
        s.p = Vec3(sc_.speed_mps * t, 0.0, 0.0);
        s.v = Vec3(sc_.speed_mps, 0.0, 0.0);
        s.R = Mat3::Identity();
        return s;
      }
      case TrajectoryKind::kCircle: {
        const double om = sc_.speed_mps / sc_.radius_m;
        const double th = om * t;
        PoseSample s;
        s.p = sc_.radius_m * Vec3(std::sin(th), 1.0 - std::cos(th), 0.0);
        s.v = sc_.speed_mps * Vec3(std::cos(th), std::sin(th), 0.0);
        s.R = rot_z(th);
        return s;
      }
      case TrajectoryKind::kFigureEight: {
        const double ud = 2.0 * M_PI / period_;
        const double u = ud * t;
        PoseSample s;
        s.p = Vec3(a_ * std::sin(u), b_ * std::sin(2.0 * u), 0.0);
        s.v = Vec3(a_ * ud * std::cos(u), 2.0 * b_ * ud * std::cos(2.0 * u), 0.0);
        s.R = rot_z(heading_of(s.v.head<2>()));
        return s;
      }
      case TrajectoryKind::kWaypointPolyline:
        return polyline_pose(t);
    }
    throw std::logic_error("unreachable");
  }

 private:
  double d_arc(double u) const {
    const double dx = a_ * std::cos(u);
    const double dy = 2.0 * b_ * std::cos(2.0 * u);
    return std::hypot(dx, dy);
  }

  struct Phase {
    double t0, t1;
    bool turning;
    Eigen::Vector2d p0, dir;  // leg: start point and unit direction
    double yaw0, yaw_rate;    // turn: starting yaw and signed rate
    double speed;
  };

  void build_polyline() {
    const auto& wp = sc_.waypoints;
    if (wp.size() < 2) {
      throw std::invalid_argument("waypoint_polyline needs at least 2 waypoints");
    }
    double t = 0.0;
    double yaw = heading_of(wp[1] - wp[0]);
    for (size_t i = 1; i < wp.size(); ++i) {
      const Eigen::Vector2d d = wp[i] - wp[i - 1];
      const double len = d.norm();
      if (len < 1e-12) continue;
      const double leg_yaw = heading_of(d);
      const double dyaw = wrap_angle(leg_yaw - yaw);
      if (std::abs(dyaw) > 1e-12) {
        Phase turn;
        turn.t0 = t;
        turn.t1 = t + std::abs(dyaw) / sc_.turn_rate_rps;
        turn.turning = true;
        turn.p0 = wp[i - 1];
        turn.yaw0 = yaw;
        turn.yaw_rate = (dyaw > 0 ? 1.0 : -1.0) * sc_.turn_rate_rps;
        turn.speed = 0.0;
        phases_.push_back(turn);
        t = turn.t1;
        yaw = leg_yaw;
      }
      Phase leg;
      leg.t0 = t;
      leg.t1 = t + len / std::max(sc_.speed_mps, 1e-9);
      leg.turning = false;
      leg.p0 = wp[i - 1];
      leg.dir = d / len;
      leg.yaw0 = leg_yaw;
      leg.yaw_rate = 0.0;
      leg.speed = sc_.speed_mps;
      phases_.push_back(leg);
      t = leg.t1;
    }
  }

  PoseSample polyline_pose(double t) const {
    const Phase* ph = &phases_.back();
    for (const auto& candidate : phases_) {
      if (t <= candidate.t1) {
        ph = &candidate;
        break;
      }
    }
    PoseSample s;
    if (ph->turning) {
      const double tau = std::clamp(t, ph->t0, ph->t1) - ph->t0;
      const double yaw = ph->yaw0 + ph->yaw_rate * tau;
      s.p = Vec3(ph->p0.x(), ph->p0.y(), 0.0);
      s.v = Vec3::Zero();
      s.R = rot_z(yaw);
    } else {
      // Past the final leg the vehicle holds position (loiter).
      const double tau = std::clamp(t, ph->t0, ph->t1) - ph->t0;
      const Eigen::Vector2d p = ph->p0 + ph->dir * ph->speed * tau;
      s.p = Vec3(p.x(), p.y(), 0.0);
      s.v = (t > ph->t1) ? Vec3::Zero()
                         : Vec3(ph->dir.x() * ph->speed, ph->dir.y() * ph->speed, 0.0);
      s.R = rot_z(ph->yaw0);
    }
    return s;
  }

 public:
  double period() const { return period_; }

 private:
  const Scenario sc_;
  double a_ = 0.0, b_ = 0.0, period_ = 1.0;  // figure-eight
  std::vector<Phase> phases_;                // polyline
};

Vec3 lerp(const Vec3& a, const Vec3& b, double alpha) {
  return a + alpha * (b - a);
}

}  // namespace

StateSnapshot sample_path(const Scenario& sc, double t) {
  const PathModel model(sc);
  const PoseSample ps = model.pose(t);
  StateSnapshot snap;
  snap.t = t;
  snap.R = ps.R;
  snap.v = ps.v;
  snap.p = ps.p;
  return snap;
}

double path_period(const Scenario& sc) {
  switch (sc.kind) {
    case TrajectoryKind::kCircle:
      return 2.0 * M_PI * sc.radius_m / std::max(sc.speed_mps, 1e-9);
    case TrajectoryKind::kFigureEight:
      return PathModel(sc).period();
    default:
      return 0.0;
  }
}

Trajectory generate_truth(const Scenario& sc) {
  if (sc.imu_rate_hz <= 0.0 || sc.duration_s < 0.0) {
    throw std::invalid_argument("scenario rates/duration must be positive");
  }
  const PathModel model(sc);
  const auto n = static_cast<size_t>(std::llround(sc.duration_s * sc.imu_rate_hz));
  Trajectory out;
  out.reserve(n + 1);
  for (size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / sc.imu_rate_hz;
    const PoseSample ps = model.pose(t);
    StateSnapshot snap;
    snap.t = t;
    snap.R = ps.R;
    snap.v = ps.v;
    snap.p = ps.p;
    out.push_back(snap);
  }
  return out;
}

std::vector<ImuSample> synthesize_imu(const Trajectory& truth,
                                      const NoiseParams& noise,
                                      const Vec3& gyro_bias0,
                                      const Vec3& accel_bias0,
                                      const Vec3& gravity, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  const auto draw3 = [&] { return Vec3(n01(rng), n01(rng), n01(rng)); };

  Vec3 bg = gyro_bias0;
  Vec3 ba = accel_bias0;
  std::vector<ImuSample> out;
  if (truth.size() < 2) return out;
  out.reserve(truth.size() - 1);
  for (size_t k = 1; k < truth.size(); ++k) {
    const StateSnapshot& s0 = truth[k - 1];
    const StateSnapshot& s1 = truth[k];
    const double dt = s1.t - s0.t;
    const double sqrt_dt = std::sqrt(dt);

    const Vec3 w_avg = so3_log((s0.R.transpose() * s1.R).eval()) / dt;
    const Vec3 f_avg = s0.R.transpose() * (s1.v - s0.v - gravity * dt) / dt;

    ImuSample u;
    u.t = s1.t;
    u.gyro = w_avg + bg + (noise.gyro / sqrt_dt).cwiseProduct(draw3());
    u.accel = f_avg + ba + (noise.accel / sqrt_dt).cwiseProduct(draw3());
    out.push_back(u);

    bg += (noise.gyro_bias * sqrt_dt).cwiseProduct(draw3());
    ba += (noise.accel_bias * sqrt_dt).cwiseProduct(draw3());
  }
  return out;
}

std::vector<PositionFixEnu> synthesize_gps_enu(const Trajectory& truth,
                                               const Vec3& sigma_enu,
                                               double gps_rate_hz, uint64_t seed,
                                               double delay_s) {
  if (gps_rate_hz <= 0.0) {
    throw std::invalid_argument("gps_rate_hz must be positive");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);

  std::vector<PositionFixEnu> out;
  if (truth.empty()) return out;
  const double t_end = truth.back().t;
  size_t hi = 1;
  for (size_t j = 0;; ++j) {
    const double t = static_cast<double>(j) / gps_rate_hz;
    if (t > t_end) break;
    while (hi + 1 < truth.size() && truth[hi].t < t) ++hi;
    const StateSnapshot& s0 = truth[hi - 1];
    const StateSnapshot& s1 = truth[hi];
    const double alpha = (t - s0.t) / std::max(s1.t - s0.t, 1e-300);
    PositionFixEnu fix;
    fix.t = t + delay_s;
    fix.p = lerp(s0.p, s1.p, std::clamp(alpha, 0.0, 1.0)) +
            sigma_enu.cwiseProduct(Vec3(n01(rng), n01(rng), n01(rng)));
    // Recorded per-axis sigma stays strictly positive so the fix remains
    // usable as a measurement noise even in noiseless scenarios.
    fix.sigma = sigma_enu.cwiseMax(1e-6);
    out.push_back(fix);
  }
  return out;
}

std::vector<GpsFix> synthesize_gps(const Trajectory& truth, const Vec3& sigma_enu,
                                   double gps_rate_hz, const EnuOrigin& origin,
                                   uint64_t seed, double delay_s) {
  const auto enu = synthesize_gps_enu(truth, sigma_enu, gps_rate_hz, seed, delay_s);
  std::vector<GpsFix> out;
  out.reserve(enu.size());
  for (const auto& f : enu) {
    GpsFix g;
    g.t = f.t;
    enu_to_geodetic(f.p, origin, g.lat_deg, g.lon_deg, g.alt_m);
    g.sigma_enu = f.sigma;
    out.push_back(g);
  }
  return out;
}

}  // namespace inekf
