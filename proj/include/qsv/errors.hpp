#pragma once

#include <stdexcept>
#include <string>

namespace qsv {

// Input fails a structural precondition (wrong dimension, bad probability, ...).
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Requested object exceeds the configured dense-dimension cap.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A conditional state was requested for an outcome of probability zero.
struct zero_branch_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A protocol quantity is undefined because the spectral gap vanishes.
struct zero_gap_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A measurement layout is incompatible with the state it is applied to.
struct incompatible_measurement_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An assembled protocol object violates its defining properties.
struct construction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qsv
