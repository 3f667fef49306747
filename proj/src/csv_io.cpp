#include "inekf/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "inekf/errors.hpp"

namespace inekf {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

class CsvReader {
 public:
  CsvReader(const std::string& path, const std::string& header) : path_(path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw SchemaError(path, 1, "missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) {
      throw SchemaError(path, 1, "header mismatch, expected '" + header + "'");
    }
    size_t row = 1;
    while (std::getline(in, line)) {
      ++row;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      rows_.emplace_back(row, split_csv(line));
    }
    n_cols_ = static_cast<size_t>(std::count(header.begin(), header.end(), ',')) + 1;
  }

  size_t size() const { return rows_.size(); }

  std::vector<double> numeric_row(size_t i) const {
    const auto& [row, fields] = rows_[i];
    if (fields.size() != n_cols_) {
      throw SchemaError(path_, row, "expected " + std::to_string(n_cols_) +
                                        " columns, got " +
                                        std::to_string(fields.size()));
    }
    std::vector<double> out(fields.size());
    for (size_t c = 0; c < fields.size(); ++c) {
      size_t used = 0;
      try {
        out[c] = std::stod(fields[c], &used);
      } catch (const std::exception&) {
        throw SchemaError(path_, row, "non-numeric field '" + fields[c] + "'");
      }
      if (used != fields[c].size() || !std::isfinite(out[c])) {
        throw SchemaError(path_, row, "bad numeric field '" + fields[c] + "'");
      }
    }
    return out;
  }

  size_t row_number(size_t i) const { return rows_[i].first; }

 private:
  std::string path_;
  size_t n_cols_ = 0;
  std::vector<std::pair<size_t, std::vector<std::string>>> rows_;
};

void check_increasing(const std::string& path, double prev_t, double t, size_t row) {
  if (t <= prev_t) {
    throw SchemaError(path, row, "timestamps not strictly increasing");
  }
}

FILE* open_out(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot write " + path);
  return f;
}

constexpr char kImuHeader[] = "t,wx,wy,wz,ax,ay,az";
constexpr char kGpsHeader[] = "t,lat,lon,alt,sd_e,sd_n,sd_u";
constexpr char kStateHeader[] =
    "t,px,py,pz,vx,vy,vz,roll_deg,pitch_deg,yaw_deg,bgx,bgy,bgz,bax,bay,baz";
constexpr char kErrorHeader[] = "t,pos_err_m,heading_err_deg";

}  // namespace

std::vector<ImuSample> read_imu_csv(const std::string& path) {
  CsvReader reader(path, kImuHeader);
  std::vector<ImuSample> out;
  out.reserve(reader.size());
  double prev_t = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < reader.size(); ++i) {
    const auto v = reader.numeric_row(i);
    check_increasing(path, prev_t, v[0], reader.row_number(i));
    prev_t = v[0];
    ImuSample u;
    u.t = v[0];
    u.gyro = Vec3(v[1], v[2], v[3]);
    u.accel = Vec3(v[4], v[5], v[6]);
    out.push_back(u);
  }
  return out;
}

std::vector<GpsFix> read_gps_csv(const std::string& path) {
  CsvReader reader(path, kGpsHeader);
  std::vector<GpsFix> out;
  out.reserve(reader.size());
  double prev_t = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < reader.size(); ++i) {
    const auto v = reader.numeric_row(i);
    const size_t row = reader.row_number(i);
    check_increasing(path, prev_t, v[0], row);
    prev_t = v[0];
    if (std::abs(v[1]) > 90.0 || std::abs(v[2]) > 180.0) {
      throw SchemaError(path, row, "lat/lon out of range");
    }
    if (v[4] <= 0.0 || v[5] <= 0.0 || v[6] <= 0.0) {
      throw SchemaError(path, row, "sd columns must be positive");
    }
    GpsFix g;
    g.t = v[0];
    g.lat_deg = v[1];
    g.lon_deg = v[2];
    g.alt_m = v[3];
    g.sigma_enu = Vec3(v[4], v[5], v[6]);
    out.push_back(g);
  }
  return out;
}

Trajectory read_state_csv(const std::string& path) {
  CsvReader reader(path, kStateHeader);
  Trajectory out;
  out.reserve(reader.size());
  double prev_t = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < reader.size(); ++i) {
    const auto v = reader.numeric_row(i);
    check_increasing(path, prev_t, v[0], reader.row_number(i));
    prev_t = v[0];
    StateSnapshot s;
    s.t = v[0];
    s.p = Vec3(v[1], v[2], v[3]);
    s.v = Vec3(v[4], v[5], v[6]);
    s.R = rotation_from_rpy(deg2rad(v[7]), deg2rad(v[8]), deg2rad(v[9]));
    s.bg = Vec3(v[10], v[11], v[12]);
    s.ba = Vec3(v[13], v[14], v[15]);
    out.push_back(s);
  }
  return out;
}

void write_imu_csv(const std::string& path, const std::vector<ImuSample>& rows) {
  FILE* f = open_out(path);
  std::fprintf(f, "%s\n", kImuHeader);
  for (const auto& u : rows) {
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", u.t,
                 u.gyro.x(), u.gyro.y(), u.gyro.z(), u.accel.x(), u.accel.y(),
                 u.accel.z());
  }
  std::fclose(f);
}

void write_gps_csv(const std::string& path, const std::vector<GpsFix>& rows) {
  FILE* f = open_out(path);
  std::fprintf(f, "%s\n", kGpsHeader);
  for (const auto& g : rows) {
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", g.t,
                 g.lat_deg, g.lon_deg, g.alt_m, g.sigma_enu.x(), g.sigma_enu.y(),
                 g.sigma_enu.z());
  }
  std::fclose(f);
}

void write_state_csv(const std::string& path, const Trajectory& rows) {
  FILE* f = open_out(path);
  std::fprintf(f, "%s\n", kStateHeader);
  for (const auto& s : rows) {
    const Vec3 rpy = rpy_from_rotation(s.R);
    std::fprintf(f,
                 "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                 "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                 s.t, s.p.x(), s.p.y(), s.p.z(), s.v.x(), s.v.y(), s.v.z(),
                 rad2deg(rpy(0)), rad2deg(rpy(1)), rad2deg(rpy(2)), s.bg.x(),
                 s.bg.y(), s.bg.z(), s.ba.x(), s.ba.y(), s.ba.z());
  }
  std::fclose(f);
}

void write_error_csv(const std::string& path, const std::vector<ErrorSample>& rows) {
  FILE* f = open_out(path);
  std::fprintf(f, "%s\n", kErrorHeader);
  for (const auto& e : rows) {
    std::fprintf(f, "%.17g,%.17g,%.17g\n", e.t, e.pos_err_m, e.heading_err_deg);
  }
  std::fclose(f);
}

std::string hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  uint64_t h = 14695981039346656037ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace inekf
