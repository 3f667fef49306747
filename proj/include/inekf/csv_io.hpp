#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inekf/correction.hpp"
#include "inekf/eval.hpp"
#include "inekf/propagation.hpp"
#include "inekf/state.hpp"

namespace inekf {

// CSV schemas (exact headers):
//   imu:    t,wx,wy,wz,ax,ay,az
//   gps:    t,lat,lon,alt,sd_e,sd_n,sd_u
//   state:  t,px,py,pz,vx,vy,vz,roll_deg,pitch_deg,yaw_deg,
//           bgx,bgy,bgz,bax,bay,baz
//   errors: t,pos_err_m,heading_err_deg
// Readers validate the header, column count, numeric parse, finiteness and
// strictly increasing timestamps; violations raise SchemaError with the
// 1-based row number.

std::vector<ImuSample> read_imu_csv(const std::string& path);
std::vector<GpsFix> read_gps_csv(const std::string& path);
Trajectory read_state_csv(const std::string& path);

void write_imu_csv(const std::string& path, const std::vector<ImuSample>& rows);
void write_gps_csv(const std::string& path, const std::vector<GpsFix>& rows);
void write_state_csv(const std::string& path, const Trajectory& rows);
void write_error_csv(const std::string& path, const std::vector<ErrorSample>& rows);

// FNV-1a of a file's bytes, rendered as "fnv1a64:<hex>"; used by run
// manifests so byte-identical outputs are cheap to assert.
std::string hash_file(const std::string& path);

}  // namespace inekf
