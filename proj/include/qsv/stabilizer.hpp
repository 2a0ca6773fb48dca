#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "qsv/linalg.hpp"
#include "qsv/pauli_string.hpp"
#include "qsv/simplex.hpp"
#include "qsv/target.hpp"

namespace qsv {

// ============================================================================
// Group-theoretic route for composite Pauli measurements on stabilizer
// targets.  A measurement pattern is a symplectic vector mu of weight t; its
// single-qubit letters generate an abelian group T_mu of size 2^t, and for a
// stabilizer target with group S the whole verification operator theory
// reduces to sign arithmetic over generator-selection masks:
//
//   R_mu   = elements of S whose letters on the measured set are each either
//            the identity or the measured axis letter (a subgroup),
//   Omega_mu = (1/|R_mu|) sum of R_mu  (projector onto the R_mu code),
//   gamma_{mu,w} = <S_w| Omega_mu |S_w> in {0,1}, where S_w is the stabilizer
//            basis state whose generators have signs flipped by w.
//
// Masks are bit vectors over generator indices: bit a-1 selects generator a.
// ============================================================================

// Abelian group generated by k <= n independent, pairwise-commuting Hermitian
// Pauli strings.  Independence (over letters) excludes -I from the group.
class StabilizerGroup {
 public:
  explicit StabilizerGroup(std::vector<PauliString> generators);
  // Trivial group {I} on n qubits.
  explicit StabilizerGroup(int n);

  int qubits() const { return n_; }
  int generator_count() const { return static_cast<int>(generators_.size()); }
  const std::vector<PauliString>& generators() const { return generators_; }
  long long size() const { return 1LL << generators_.size(); }

  // Product of the generators selected by `mask` (bit a-1 <-> generator a),
  // with the accumulated sign.
  PauliString element(std::uint64_t mask) const;
  std::vector<PauliString> elements() const;  // all 2^k, mask order

  // Projector onto the joint +1 eigenspace, prod_a (I + g_a)/2 (dense).
  Matrix projector() const;

  // Selection mask whose element has the same letters as p, if the letters
  // lie in the span of the generators' letters.
  std::optional<std::uint64_t> letter_decomposition(const PauliString& p) const;
  bool contains(const PauliString& p) const;           // letters and sign match
  bool contains_negation(const PauliString& p) const;  // -p is a member

 private:
  int n_ = 0;
  std::vector<PauliString> generators_;
  struct EchelonRow {
    std::uint64_t x = 0, z = 0, combo = 0;
  };
  std::vector<EchelonRow> echelon_;  // row-reduced symplectic rows + provenance
};

// T_mu: the group generated by the measured single-qubit letters of mu
// (ascending qubit order, all signs +1).
StabilizerGroup measurement_group(const SymplecticVector& mu);

// Pi_{mu,v}: projector onto the joint outcome v of the composite measurement,
// prod_a (I + (-1)^{v_a} P_{j_a})/2, identity on unmeasured qubits.  v is
// indexed over the measured qubits in ascending order.
Matrix outcome_projector(const SymplecticVector& mu, const std::vector<int>& v);

// Test operator for an arbitrary target: sum over outcomes v with nonzero
// probability of (outcome projector on J) tensor (normalized conditional
// state on the complement).  Requires weight >= 1; throws
// incompatible_measurement_error when the all-plus outcome has zero
// probability (the regime where the group closed forms below break down).
Matrix general_test_operator(const DensityOperator& rho, const SymplecticVector& mu);

// Equivalent group form (1 / (2^t Tr(rho Pi_{mu,0}))) sum_{T in T_mu}
// T (x) Tr_J(rho T).  Valid whenever all nonzero outcome branches are
// equiprobable -- in particular for every stabilizer target; used as a
// cross-check against the branch-sum construction.
Matrix group_sum_test_operator(const DensityOperator& rho, const SymplecticVector& mu);

struct RGroup {
  StabilizerGroup group;                 // R_mu
  std::vector<std::uint64_t> selectors;  // masks v with g^v = the R_mu generators
};

// R_mu for a full (n-generator) stabilizer group: the subgroup of S whose
// letters on the measured set are compatible with mu.  Computed by solving a
// t x n linear system over F_2; never enumerates S.
RGroup r_group(const StabilizerGroup& s, const SymplecticVector& mu);

// Omega_mu = (1/|R_mu|) sum of R_mu (dense).  Throws
// incompatible_measurement_error when (-T_mu) intersects S.
Matrix stabilizer_test_operator(const StabilizerGroup& s, const SymplecticVector& mu);

// gamma_{mu,w} for every w at once: 1 iff w is orthogonal to all selector
// masks of R_mu, evaluated by parity checks only.
struct GammaTable {
  int n = 0;
  std::vector<std::uint64_t> selectors;  // R_mu generator selection masks

  bool gamma(std::uint64_t w) const {
    for (std::uint64_t s : selectors)
      if (std::popcount(s & w) & 1) return false;
    return true;
  }
  long long r_group_size() const { return 1LL << selectors.size(); }
};

GammaTable stabilizer_basis_diagonal(const StabilizerGroup& s, const SymplecticVector& mu);

// All weight-t measurement patterns on n qubits: supports in lexicographic
// order, axes in X<Y<Z odometer order within each support.
std::vector<SymplecticVector> weight_t_measurements(int n, int t);

// True when the generator list is exactly {+X..X, +Z1Z2, ..., +Z1Zn}: the
// presentation under which the permutation symmetry of the GHZ state acts by
// permuting generators 2..n.
bool is_standard_ghz_group(const StabilizerGroup& s);

enum class GapScheme { naive, ghz_classes };

struct GapReport {
  double nu = 0.0;                 // 1 - second_eigenvalue
  double second_eigenvalue = 0.0;  // max_{w != 0} gamma_{t,w}
  std::uint64_t argmax_w = 0;      // sign-flip mask attaining the max
};

// Spectral gap of the weight-t strategy operator under uniform sampling,
// computed entirely from gamma tables.  `naive` weights every mu equally;
// `ghz_classes` weights each permutation class uniformly (standard GHZ
// presentation required).  For the standard GHZ group the w search uses the
// (w_1, |w_2..n|) symmetry reduction, so large n stays cheap; otherwise all
// 2^n - 1 sign patterns are scanned (n <= 8).
GapReport uniform_gap(const StabilizerGroup& s, int t, GapScheme scheme);

struct GhzClass {
  std::array<int, 3> counts{};  // (m_x, m_y, m_z), summing to t
  long long size = 0;           // number of weight-t mu in the class
  double probability = 0.0;     // class-uniform p_[mu] = 2/((t+1)(t+2))
  SymplecticVector representative;
};

// Permutation equivalence classes of weight-t measurements for the GHZ
// state: one class per letter-count triple, C(t+2,2) classes in total.
std::vector<GhzClass> ghz_equivalence_classes(int n, int t);

struct LpGapOptimum {
  std::vector<SymplecticVector> measurements;  // weight-t mu, enumeration order
  std::vector<double> p;                       // optimal sampling distribution
  double nu = 0.0;                             // optimal spectral gap
  int iterations = 0;                          // simplex pivots
};

// Best spectral gap over all distributions on weight-t measurements:
// min_p max_{w != 0} sum_mu p_mu gamma_{mu,w}, solved as a game LP with the
// dense simplex (n <= 8).
LpGapOptimum lp_optimize(const StabilizerGroup& s, int t);

}  // namespace qsv
