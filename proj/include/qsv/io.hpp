#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qsv/linalg.hpp"
#include "qsv/target.hpp"

namespace qsv {

inline constexpr const char* kVersion = "0.1.0";

// ============================================================================
// JSON target/device descriptions and CSV table emission.
//
// Target documents:
//   {"kind": "ghz", "n": 3}
//   {"kind": "haar", "n": 3, "seed": 7}
//   {"kind": "random-stabilizer", "n": 3, "seed": 7}
//   {"kind": "dense", "amplitudes": [[re, im], ...]}      (length a power of 2)
//   {"kind": "stabilizer", "generators": ["+XXX", "+ZZI", ...]}
//
// Density documents:
//   {"kind": "pure", "amplitudes": [[re, im], ...]}
//   {"kind": "density", "matrix": [[[re, im], ...], ...]}
// ============================================================================

Target parse_target_json(const std::string& text);
Target load_target_json(const std::string& path);

DensityOperator parse_density_json(const std::string& text);
DensityOperator load_density_json(const std::string& path);

// CSV with a header row, data rows, and a trailing comment block of
// "# key=value" metadata lines.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               const std::vector<std::string>& metadata);

}  // namespace qsv
