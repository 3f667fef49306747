#pragma once

#include <stdexcept>
#include <string>

namespace inekf {

// Contract violations surface as typed exceptions; the CLI maps each family
// to a stable process exit code.

struct FilterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// IMU sample does not advance time.
struct NonMonotonicTime : FilterError {
  using FilterError::FilterError;
};

// IMU gap exceeds the configured propagation bound.
struct GapTooLarge : FilterError {
  using FilterError::FilterError;
};

// Innovation covariance is numerically singular (cond > configured limit).
struct SingularInnovation : FilterError {
  using FilterError::FilterError;
};

// Geodetic conversion requested before an ENU origin was anchored.
struct OriginUnset : FilterError {
  using FilterError::FilterError;
};

// Estimate and reference tracks share no time span.
struct NoOverlap : FilterError {
  using FilterError::FilterError;
};

// State or covariance became non-finite during a run.
struct DivergenceError : FilterError {
  using FilterError::FilterError;
};

// Malformed input row; message carries the 1-based row number.
struct SchemaError : std::runtime_error {
  SchemaError(const std::string& file, size_t row, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(row) + ": " + what),
        row_number(row) {}
  size_t row_number;
};

// Bad or missing configuration value; message names the offending key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace inekf
