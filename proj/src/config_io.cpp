#include "inekf/config_io.hpp"

#include <fstream>
#include <set>

#include "inekf/errors.hpp"

namespace inekf {
namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(ctx + ": unknown key '" + key + "'");
  }
}

double num_of(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError("key '" + key + "' must be a number");
  return j.at(key).get<double>();
}

bool bool_of(const json& j, const std::string& key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError("key '" + key + "' must be a bool");
  return j.at(key).get<bool>();
}

uint64_t uint_of(const json& j, const std::string& key, uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_unsigned() && !j.at(key).is_number_integer()) {
    throw ConfigError("key '" + key + "' must be an integer");
  }
  return j.at(key).get<uint64_t>();
}

// Accepts a scalar (broadcast) or a 3-element array.
Vec3 vec3_of(const json& j, const std::string& key, const Vec3& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_number()) return Vec3::Constant(v.get<double>());
  if (v.is_array() && v.size() == 3 && v[0].is_number() && v[1].is_number() &&
      v[2].is_number()) {
    return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
  }
  throw ConfigError("key '" + key + "' must be a number or [x, y, z]");
}

json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

NoiseParams noise_from_json(const json& j, const std::string& ctx,
                            const NoiseParams& fallback) {
  check_keys(j, {"gyro", "accel", "gyro_bias", "accel_bias"}, ctx);
  NoiseParams n;
  n.gyro = vec3_of(j, "gyro", fallback.gyro);
  n.accel = vec3_of(j, "accel", fallback.accel);
  n.gyro_bias = vec3_of(j, "gyro_bias", fallback.gyro_bias);
  n.accel_bias = vec3_of(j, "accel_bias", fallback.accel_bias);
  return n;
}

json noise_to_json(const NoiseParams& n) {
  json j;
  j["gyro"] = vec3_to_json(n.gyro);
  j["accel"] = vec3_to_json(n.accel);
  j["gyro_bias"] = vec3_to_json(n.gyro_bias);
  j["accel_bias"] = vec3_to_json(n.accel_bias);
  return j;
}

}  // namespace

FilterConfig filter_config_from_json(const json& j) {
  check_keys(j,
             {"noise", "initial_sigma", "gravity", "gain_mode", "heading_mode",
              "v_min", "cog_yaw_sigma_deg", "max_pair_gap_s",
              "imu_includes_gravity", "max_imu_dt_s", "cond_max",
              "init_position", "init_yaw_deg", "seed"},
             "filter config");
  FilterConfig cfg;
  if (j.contains("noise")) {
    cfg.noise = noise_from_json(j.at("noise"), "noise", cfg.noise);
  }
  if (j.contains("initial_sigma")) {
    const json& s = j.at("initial_sigma");
    check_keys(s, {"orientation", "velocity", "position", "gyro_bias", "accel_bias"},
               "initial_sigma");
    cfg.initial_sigma.orientation = vec3_of(s, "orientation", cfg.initial_sigma.orientation);
    cfg.initial_sigma.velocity = vec3_of(s, "velocity", cfg.initial_sigma.velocity);
    cfg.initial_sigma.position = vec3_of(s, "position", cfg.initial_sigma.position);
    cfg.initial_sigma.gyro_bias = vec3_of(s, "gyro_bias", cfg.initial_sigma.gyro_bias);
    cfg.initial_sigma.accel_bias = vec3_of(s, "accel_bias", cfg.initial_sigma.accel_bias);
  }
  cfg.gravity = vec3_of(j, "gravity", cfg.gravity);
  if (j.contains("gain_mode")) {
    const std::string m = j.at("gain_mode").get<std::string>();
    if (m == "kalman") cfg.gain_mode = GainMode::kKalman;
    else if (m == "wls") cfg.gain_mode = GainMode::kWls;
    else throw ConfigError("key 'gain_mode': unknown value '" + m + "'");
  }
  if (j.contains("heading_mode")) {
    const std::string m = j.at("heading_mode").get<std::string>();
    if (m == "cog_composed") cfg.heading_mode = HeadingMode::kCogComposed;
    else if (m == "imu_raw") cfg.heading_mode = HeadingMode::kImuRaw;
    else throw ConfigError("key 'heading_mode': unknown value '" + m + "'");
  }
  cfg.v_min = num_of(j, "v_min", cfg.v_min);
  cfg.cog_yaw_sigma_deg = num_of(j, "cog_yaw_sigma_deg", cfg.cog_yaw_sigma_deg);
  cfg.max_pair_gap_s = num_of(j, "max_pair_gap_s", cfg.max_pair_gap_s);
  cfg.imu_includes_gravity = bool_of(j, "imu_includes_gravity", cfg.imu_includes_gravity);
  cfg.max_imu_dt_s = num_of(j, "max_imu_dt_s", cfg.max_imu_dt_s);
  cfg.cond_max = num_of(j, "cond_max", cfg.cond_max);
  cfg.init_position = vec3_of(j, "init_position", cfg.init_position);
  cfg.init_yaw_deg = num_of(j, "init_yaw_deg", cfg.init_yaw_deg);
  cfg.seed = uint_of(j, "seed", cfg.seed);

  if (cfg.v_min < 0.0) throw ConfigError("key 'v_min' must be >= 0");
  if (cfg.max_imu_dt_s <= 0.0) throw ConfigError("key 'max_imu_dt_s' must be > 0");
  return cfg;
}

FilterConfig load_filter_config(const std::string& path) {
  if (path.empty()) return FilterConfig{};
  return filter_config_from_json(load_json(path));
}

json filter_config_to_json(const FilterConfig& cfg) {
  json j;
  j["noise"] = noise_to_json(cfg.noise);
  json s;
  s["orientation"] = vec3_to_json(cfg.initial_sigma.orientation);
  s["velocity"] = vec3_to_json(cfg.initial_sigma.velocity);
  s["position"] = vec3_to_json(cfg.initial_sigma.position);
  s["gyro_bias"] = vec3_to_json(cfg.initial_sigma.gyro_bias);
  s["accel_bias"] = vec3_to_json(cfg.initial_sigma.accel_bias);
  j["initial_sigma"] = s;
  j["gravity"] = vec3_to_json(cfg.gravity);
  j["gain_mode"] = cfg.gain_mode == GainMode::kKalman ? "kalman" : "wls";
  j["heading_mode"] =
      cfg.heading_mode == HeadingMode::kCogComposed ? "cog_composed" : "imu_raw";
  j["v_min"] = cfg.v_min;
  j["cog_yaw_sigma_deg"] = cfg.cog_yaw_sigma_deg;
  j["max_pair_gap_s"] = cfg.max_pair_gap_s;
  j["imu_includes_gravity"] = cfg.imu_includes_gravity;
  j["max_imu_dt_s"] = cfg.max_imu_dt_s;
  j["cond_max"] = cfg.cond_max;
  j["init_position"] = vec3_to_json(cfg.init_position);
  j["init_yaw_deg"] = cfg.init_yaw_deg;
  j["seed"] = cfg.seed;
  return j;
}

Scenario scenario_from_json(const json& j) {
  check_keys(j,
             {"trajectory", "duration_s", "speed_mps", "imu_rate_hz",
              "gps_rate_hz", "radius_m", "scale_m", "waypoints", "turn_rate_rps",
              "imu_noise", "gyro_bias0", "accel_bias0", "gps_sigma_enu",
              "gps_delay_s", "origin", "gravity", "seed"},
             "scenario");
  Scenario sc;
  if (j.contains("trajectory")) {
    const std::string k = j.at("trajectory").get<std::string>();
    if (k == "line") sc.kind = TrajectoryKind::kLine;
    else if (k == "circle") sc.kind = TrajectoryKind::kCircle;
    else if (k == "figure_eight") sc.kind = TrajectoryKind::kFigureEight;
    else if (k == "waypoint_polyline") sc.kind = TrajectoryKind::kWaypointPolyline;
    else throw ConfigError("key 'trajectory': unknown kind '" + k + "'");
  }
  sc.duration_s = num_of(j, "duration_s", sc.duration_s);
  sc.speed_mps = num_of(j, "speed_mps", sc.speed_mps);
  sc.imu_rate_hz = num_of(j, "imu_rate_hz", sc.imu_rate_hz);
  sc.gps_rate_hz = num_of(j, "gps_rate_hz", sc.gps_rate_hz);
  sc.radius_m = num_of(j, "radius_m", sc.radius_m);
  sc.scale_m = num_of(j, "scale_m", sc.scale_m);
  if (j.contains("waypoints")) {
    if (!j.at("waypoints").is_array()) {
      throw ConfigError("key 'waypoints' must be an array of [x, y]");
    }
    for (const auto& w : j.at("waypoints")) {
      if (!w.is_array() || w.size() != 2) {
        throw ConfigError("key 'waypoints' must contain [x, y] pairs");
      }
      sc.waypoints.emplace_back(w[0].get<double>(), w[1].get<double>());
    }
  }
  sc.turn_rate_rps = num_of(j, "turn_rate_rps", sc.turn_rate_rps);
  if (j.contains("imu_noise")) {
    sc.imu_noise = noise_from_json(j.at("imu_noise"), "imu_noise", sc.imu_noise);
  }
  sc.gyro_bias0 = vec3_of(j, "gyro_bias0", sc.gyro_bias0);
  sc.accel_bias0 = vec3_of(j, "accel_bias0", sc.accel_bias0);
  sc.gps_sigma_enu = vec3_of(j, "gps_sigma_enu", sc.gps_sigma_enu);
  sc.gps_delay_s = num_of(j, "gps_delay_s", sc.gps_delay_s);
  if (j.contains("origin")) {
    const json& o = j.at("origin");
    check_keys(o, {"lat_deg", "lon_deg", "alt_m"}, "origin");
    sc.origin.lat_deg = num_of(o, "lat_deg", sc.origin.lat_deg);
    sc.origin.lon_deg = num_of(o, "lon_deg", sc.origin.lon_deg);
    sc.origin.alt_m = num_of(o, "alt_m", sc.origin.alt_m);
  }
  sc.gravity = vec3_of(j, "gravity", sc.gravity);
  sc.seed = uint_of(j, "seed", sc.seed);

  if (sc.duration_s <= 0.0) throw ConfigError("key 'duration_s' must be > 0");
  if (sc.imu_rate_hz <= 0.0) throw ConfigError("key 'imu_rate_hz' must be > 0");
  if (sc.gps_rate_hz <= 0.0) throw ConfigError("key 'gps_rate_hz' must be > 0");
  return sc;
}

Scenario load_scenario(const std::string& path) {
  if (path.empty()) return Scenario{};
  return scenario_from_json(load_json(path));
}

json scenario_to_json(const Scenario& sc) {
  json j;
  switch (sc.kind) {
    case TrajectoryKind::kLine: j["trajectory"] = "line"; break;
    case TrajectoryKind::kCircle: j["trajectory"] = "circle"; break;
    case TrajectoryKind::kFigureEight: j["trajectory"] = "figure_eight"; break;
    case TrajectoryKind::kWaypointPolyline: j["trajectory"] = "waypoint_polyline"; break;
  }
  j["duration_s"] = sc.duration_s;
  j["speed_mps"] = sc.speed_mps;
  j["imu_rate_hz"] = sc.imu_rate_hz;
  j["gps_rate_hz"] = sc.gps_rate_hz;
  j["radius_m"] = sc.radius_m;
  j["scale_m"] = sc.scale_m;
  if (!sc.waypoints.empty()) {
    json w = json::array();
    for (const auto& p : sc.waypoints) w.push_back(json::array({p.x(), p.y()}));
    j["waypoints"] = w;
  }
  j["turn_rate_rps"] = sc.turn_rate_rps;
  j["imu_noise"] = noise_to_json(sc.imu_noise);
  j["gyro_bias0"] = vec3_to_json(sc.gyro_bias0);
  j["accel_bias0"] = vec3_to_json(sc.accel_bias0);
  j["gps_sigma_enu"] = vec3_to_json(sc.gps_sigma_enu);
  j["gps_delay_s"] = sc.gps_delay_s;
  json o;
  o["lat_deg"] = sc.origin.lat_deg;
  o["lon_deg"] = sc.origin.lon_deg;
  o["alt_m"] = sc.origin.alt_m;
  j["origin"] = o;
  j["gravity"] = vec3_to_json(sc.gravity);
  j["seed"] = sc.seed;
  return j;
}

}  // namespace inekf
