#include "inekf/heading.hpp"

#include <cmath>

namespace inekf {
namespace {

// WGS-84 ellipsoid.
constexpr double kSemiMajor = 6378137.0;
constexpr double kFlattening = 1.0 / 298.257223563;
constexpr double kEcc2 = kFlattening * (2.0 - kFlattening);

// Meridian (north-south) and prime-vertical (east-west) radii of curvature.
void radii_at(double lat_rad, double alt_m, double& r_north, double& r_east) {
  const double s = std::sin(lat_rad);
  const double w2 = 1.0 - kEcc2 * s * s;
  const double w = std::sqrt(w2);
  const double n = kSemiMajor / w;            // prime vertical
  const double m = n * (1.0 - kEcc2) / w2;    // meridian
  r_north = m + alt_m;
  r_east = (n + alt_m) * std::cos(lat_rad);
}

}  // namespace

Vec3 geodetic_to_enu(double lat_deg, double lon_deg, double alt_m,
                     const EnuOrigin& origin) {
  double r_north, r_east;
  radii_at(deg2rad(origin.lat_deg), origin.alt_m, r_north, r_east);
  return Vec3(r_east * deg2rad(lon_deg - origin.lon_deg),
              r_north * deg2rad(lat_deg - origin.lat_deg),
              alt_m - origin.alt_m);
}

Vec3 geodetic_to_enu(const GpsFix& fix, const EnuOrigin& origin) {
  return geodetic_to_enu(fix.lat_deg, fix.lon_deg, fix.alt_m, origin);
}

void enu_to_geodetic(const Vec3& enu, const EnuOrigin& origin, double& lat_deg,
                     double& lon_deg, double& alt_m) {
  double r_north, r_east;
  radii_at(deg2rad(origin.lat_deg), origin.alt_m, r_north, r_east);
  lat_deg = origin.lat_deg + rad2deg(enu.y() / r_north);
  lon_deg = origin.lon_deg + rad2deg(enu.x() / r_east);
  alt_m = origin.alt_m + enu.z();
}

CogResult cog_heading(const Vec3& p_prev, const Vec3& p_curr, double dt,
                      double v_min) {
  CogResult out;
  if (dt <= 0.0) return out;
  const double de = p_curr.x() - p_prev.x();
  const double dn = p_curr.y() - p_prev.y();
  out.speed = std::hypot(de, dn) / dt;
  out.valid = out.speed >= v_min;
  if (out.valid) out.yaw = std::atan2(dn, de);
  return out;
}

HeadingComposition build_heading_reference(double yaw_cog, const Mat3& R_imu) {
  const Vec3 rpy = rpy_from_rotation(R_imu);
  HeadingComposition out;
  out.R = rotation_from_rpy(rpy(0), rpy(1), yaw_cog);
  out.gimbal_proximity = std::abs(rpy(1)) > deg2rad(85.0);
  return out;
}

std::optional<HeadingReference> HeadingGenerator::feed(double t, const Vec3& p_enu,
                                                       const Vec3& sigma_enu,
                                                       const Mat3& R_imu) {
  std::optional<HeadingReference> out;
  last_cog_ = CogResult{};
  if (has_prev_ && t > prev_t_ && t - prev_t_ <= cfg_.max_pair_gap_s) {
    const double dt = t - prev_t_;
    const CogResult cog = cog_heading(prev_p_, p_enu, dt, cfg_.v_min);
    last_cog_ = cog;
    if (cog.valid) {
      const HeadingComposition comp = build_heading_reference(cog.yaw, R_imu);
      if (!comp.gimbal_proximity) {
        // Model error shrinks with speed; receiver noise maps into course
        // error through the pair baseline.
        const double model = deg2rad(cfg_.cog_yaw_sigma_deg) *
                             (cfg_.v_min / std::max(cog.speed, cfg_.v_min));
        const double sig_h = 0.5 * (sigma_enu.x() + sigma_enu.y() +
                                    prev_sigma_.x() + prev_sigma_.y()) * 0.5;
        const double baseline = std::max(cog.speed * dt, 1e-9);
        const double gps = std::sqrt(2.0) * sig_h / baseline;
        HeadingReference ref;
        ref.t = t;
        ref.R = comp.R;
        ref.valid = true;
        ref.speed = cog.speed;
        ref.yaw_sigma = std::sqrt(model * model + gps * gps);
        out = ref;
      }
    }
  }
  has_prev_ = true;
  prev_t_ = t;
  prev_p_ = p_enu;
  prev_sigma_ = sigma_enu;
  return out;
}

}  // namespace inekf
