#pragma once

#include <vector>

#include "qsv/errors.hpp"

namespace qsv {

// ============================================================================
// Dense primal simplex for the small linear programs that arise when
// optimizing measurement distributions.  Solves
//
//     maximize    c . x
//     subject to  A x <= b,   x >= 0,
//
// where every entry of b is nonnegative, so the slack basis is feasible and
// no phase-one start is needed.  Sizes here are at most a few thousand
// variables by a few hundred rows, well within dense-tableau territory.
// ============================================================================

struct LpResult {
  std::vector<double> x;    // optimal point, size = #variables
  double objective = 0.0;   // c . x at the optimum
  int iterations = 0;       // pivot count
};

// Dantzig pricing with a Bland fallback late in the run so degenerate
// programs cannot cycle.  Throws validation_error on malformed input
// (size mismatches, negative b), construction_error on an unbounded
// program or when the iteration cap is exceeded.
LpResult simplex_maximize(const std::vector<std::vector<double>>& a,
                          const std::vector<double>& b,
                          const std::vector<double>& c,
                          int max_iterations = 50000);

}  // namespace qsv
