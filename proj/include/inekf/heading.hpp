#pragma once

#include <optional>

#include "inekf/config.hpp"
#include "inekf/correction.hpp"
#include "inekf/lie.hpp"

namespace inekf {

// Anchor of the local east-north-up frame.
struct EnuOrigin {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_m = 0.0;
};

// Tangent-plane projection using the exact WGS-84 radii of curvature at the
// origin latitude. Linear in (dlat, dlon, dalt), so enu_to_geodetic inverts
// it to machine precision; adequate below a few km from the origin.
Vec3 geodetic_to_enu(double lat_deg, double lon_deg, double alt_m,
                     const EnuOrigin& origin);
Vec3 geodetic_to_enu(const GpsFix& fix, const EnuOrigin& origin);

void enu_to_geodetic(const Vec3& enu, const EnuOrigin& origin, double& lat_deg,
                     double& lon_deg, double& alt_m);

struct CogResult {
  double yaw = 0.0;    // rad, from +east, counterclockwise
  double speed = 0.0;  // m/s over the pair interval
  bool valid = false;  // speed >= v_min
};

// Course over ground between two ENU positions. Yaw is atan2(dn, de), the
// world-frame yaw of a vehicle moving along the displacement.
CogResult cog_heading(const Vec3& p_prev, const Vec3& p_curr, double dt,
                      double v_min);

struct HeadingComposition {
  Mat3 R = Mat3::Identity();
  // |pitch| > 85 deg: yaw/roll split is ill-conditioned, caller may skip.
  bool gimbal_proximity = false;
};

// Rz(yaw_cog) * Ry(pitch) * Rx(roll) with roll/pitch taken from R_imu:
// GPS supplies absolute yaw, the inertial attitude supplies the level axes.
HeadingComposition build_heading_reference(double yaw_cog, const Mat3& R_imu);

struct HeadingReference {
  double t = 0.0;
  Mat3 R = Mat3::Identity();
  bool valid = false;
  double speed = 0.0;
  double yaw_sigma = 0.0;  // rad, model error plus GPS-noise propagation
};

// Sliding two-fix window that turns consecutive ENU fixes into full
// orientation references. Stateless apart from the previous accepted fix.
class HeadingGenerator {
 public:
  explicit HeadingGenerator(const FilterConfig& cfg) : cfg_(cfg) {}

  // Feed every accepted fix in time order; returns a reference when the pair
  // spacing, speed gate, and gimbal check all pass.
  std::optional<HeadingReference> feed(double t, const Vec3& p_enu,
                                       const Vec3& sigma_enu, const Mat3& R_imu);

  // Course computed by the most recent feed(); default (invalid, speed 0)
  // when no usable pair existed. For debug streams.
  const CogResult& last_cog() const { return last_cog_; }

  void reset() { has_prev_ = false; }

 private:
  FilterConfig cfg_;
  bool has_prev_ = false;
  double prev_t_ = 0.0;
  Vec3 prev_p_ = Vec3::Zero();
  Vec3 prev_sigma_ = Vec3::Zero();
  CogResult last_cog_;
};

}  // namespace inekf
