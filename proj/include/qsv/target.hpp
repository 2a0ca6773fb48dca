#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "qsv/linalg.hpp"
#include "qsv/pauli.hpp"
#include "qsv/pauli_string.hpp"
#include "qsv/rng.hpp"

namespace qsv {

// ============================================================================
// Target-state models.  The protocols only ever interact with the target
// through amplitude queries and post-measurement state construction, so each
// model has to support exactly those two operations.
// ============================================================================

// --- dense ------------------------------------------------------------------

struct DenseTarget {
  PureState state;
};

// --- matrix product state ---------------------------------------------------

// Rank-3 tensor with index order (left bond, physical, right bond).
struct Tensor3 {
  int dl = 0, dp = 0, dr = 0;
  std::vector<Complex> data;  // row-major over (l, p, r)

  Tensor3() = default;
  Tensor3(int dl, int dp, int dr);
  Complex& at(int l, int p, int r) { return data[(l * dp + p) * dr + r]; }
  const Complex& at(int l, int p, int r) const { return data[(l * dp + p) * dr + r]; }
};

// Open-boundary MPS with physical dimension 2; tensors[i] is site i+1 (qubit
// i+1, most significant first).  Normalized on construction (tolerates and
// rescales drift up to 1e-6).
struct MpsTarget {
  int n = 0;
  std::vector<Tensor3> tensors;

  MpsTarget() = default;
  explicit MpsTarget(std::vector<Tensor3> tensors);

  int max_bond() const;
};

// --- stabilizer -------------------------------------------------------------

// Stabilizer state given by n independent commuting generators with +/-1
// signs.  The dense state vector is materialized once at construction (the
// group-theoretic protocol routes elsewhere work from the generators alone).
struct StabilizerTarget {
  int n = 0;
  std::vector<PauliString> generators;
  PureState state;

  StabilizerTarget() = default;
  explicit StabilizerTarget(std::vector<PauliString> generators);
};

// --- polymorphic wrapper ----------------------------------------------------

using Target = std::variant<DenseTarget, MpsTarget, StabilizerTarget>;

int target_qubits(const Target& target);

// Materialize the full state vector (subject to the dimension cap).
PureState target_to_dense(const Target& target);

// <z|psi> for a computational-basis string z (bits, qubit 1 first).
Complex amplitude(const Target& target, const std::vector<int>& z_bits);

// Generalized query: <s|psi> where |s> is the product of per-qubit axis
// eigenstates |s_q> = axis_eigenstate(axes[q], bits[q]).
Complex amplitude(const Target& target, const std::vector<Axis>& axes,
                  const std::vector<int>& bits);

// Normalized conditional state of the target on the unmeasured register K
// after reading `outcomes` on layout.measured.  Probability-zero branches
// raise zero_branch_error.  Dense targets contract directly; MPS targets use
// the bond-space contraction (measured sites collapse to bond matrices).
PureState post_measurement_target(const Target& target, const PauliLayout& layout,
                                  const std::vector<int>& outcomes);

// Probability of reading `outcomes` on layout.measured (squared branch norm).
double outcome_probability(const Target& target, const PauliLayout& layout,
                           const std::vector<int>& outcomes);

// Amplitude-oracle facade used by protocol code paths that only need queries.
struct GeneralizedQueryModel {
  Target backing;
  Complex query(const std::vector<Axis>& axes, const std::vector<int>& bits) const {
    return amplitude(backing, axes, bits);
  }
};

// --- families ---------------------------------------------------------------

struct GhzTarget {
  DenseTarget dense;
  StabilizerTarget stabilizer;
};

// (|0...0> + |1...1>)/sqrt2 with generators {X...X, Z1Z2, Z1Z3, ..., Z1Zn}.
GhzTarget ghz(int n);

// The same state as a bond-dimension-2 MPS.
MpsTarget ghz_mps(int n);

// Haar-random pure state (normalized complex Gaussian amplitudes).
DenseTarget haar_random(int n, std::uint64_t seed);

// Exact MPS factorization of a dense state by successive SVD splits.
MpsTarget mps_from_dense(const PureState& psi, double sv_cutoff = 1e-14);

// Random stabilizer state sampled by conjugating {Z_1..Z_n} through a random
// H/S/CNOT circuit.
StabilizerTarget random_stabilizer(int n, std::uint64_t seed);

}  // namespace qsv
