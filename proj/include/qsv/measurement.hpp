#pragma once

#include <vector>

#include "qsv/linalg.hpp"
#include "qsv/pauli.hpp"
#include "qsv/rng.hpp"

namespace qsv {

// ============================================================================
// Projective Pauli measurements and single-snapshot classical shadows.
// ============================================================================

struct BornResult {
  std::vector<int> outcomes;  // bits, aligned with layout.measured
  DensityOperator reduced;    // normalized conditional state on K
  double probability = 0.0;   // joint probability of the drawn outcome string
};

// Measure layout.measured of `rho` in the given axes.  Outcomes are drawn
// qubit-by-qubit from exact conditional distributions (project & renormalize),
// so correlated states are handled exactly.
BornResult born_sample(const DensityOperator& rho, const PauliLayout& layout, RngStream& rng);

// One classical-shadow snapshot: every qubit measured in a uniformly random
// Pauli axis.  materialize() yields the tensor product of per-qubit factors
// 3|s><s| - I, the single-snapshot estimator whose expectation over axes and
// outcomes is the measured state itself.
struct ClassicalShadow {
  std::vector<Axis> axes;
  std::vector<int> outcomes;

  int qubits() const { return static_cast<int>(axes.size()); }
  Matrix materialize() const;
};

ClassicalShadow shadow_snapshot(const DensityOperator& zeta, RngStream& rng);

// Tr(shadow * |phi><phi|) = <phi| (x)_q (3|s_q><s_q| - I) |phi>, exactly real.
double shadow_overlap(const ClassicalShadow& shadow, const PureState& phi);

}  // namespace qsv
