#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsv/devicesim.hpp"
#include "qsv/hypotest.hpp"
#include "qsv/measurement.hpp"
#include "qsv/plm.hpp"
#include "qsv/target.hpp"

namespace qsv {

// ============================================================================
// Level-r shadow overlap protocol with randomized measurement bases (DPSO):
// draw a size-r kept subset K and a Pauli axis string for the complement J,
// measure J in those axes, shadow the K register, and score it against the
// conditional target state of the drawn branch.
// ============================================================================

// A pair of independent distributions: p over kept subsets K of size r
// (equivalently over measured complements J) and q over axis strings
// l in {X,Y,Z}^{n-r} applied to J in ascending qubit order.
struct SamplingPlan {
  int n = 0;
  int level = 0;                          // r = |K|
  std::vector<std::vector<int>> subsets;  // kept subsets K, ascending entries
  std::vector<double> subset_probs;       // p, aligned with subsets
  std::vector<std::string> axis_strings;  // letters X/Y/Z, length n - r
  std::vector<double> axis_probs;         // q, aligned with axis_strings

  // Structural checks: level in [1, n-1], subsets sorted/in-range/size r,
  // axis strings of the right length, both distributions nonnegative and
  // summing to 1 within 1e-10.
  void validate() const;

  // Uniform p over all C(n, r) subsets, uniform q over all 3^{n-r} strings.
  static SamplingPlan naive_uniform(int n, int level);

  // Uniform p over subsets; q weights every string so that each axis-count
  // class (m_x, m_y, m_z) carries equal total mass:
  //   q_l = 2 m_x! m_y! m_z! / (t! (t+1)(t+2)),  t = n - r.
  static SamplingPlan ghz_class_uniform(int n, int level);
};

// The test operator of one (K, l) layout: Omega_{K,l} = sum_z |s_z><s_z| (x)
// |phi_{K,z}><phi_{K,z}| over the nonzero branches z of the target, embedded
// in global qubit order.  Always a projector fixing the target.
struct DpsoTestOperator {
  std::vector<int> kept;                 // K, ascending
  std::vector<Axis> axes;                // on J, ascending qubit order
  PauliLayout layout;                    // the measurement of J
  Matrix matrix;                         // Omega_{K,l}
  std::vector<long long> outcomes;       // surviving branch indices (MSB-first over J)
  std::vector<PureState> branch_states;  // phi_{K,z} on the K register
  std::vector<double> branch_probs;      // target probability of each branch
};

DpsoTestOperator build_test_operator(const Target& target, const std::vector<int>& kept,
                                     const std::vector<Axis>& axes);

// Omega = sum_{K,l} p_K q_l Omega_{K,l} over the support of the plan.
// Satisfies 0 <= Omega <= I and Omega|psi> = |psi>.
StrategyOperator build_strategy_operator(const Target& target, const SamplingPlan& plan);

struct DpsoTrial {
  std::vector<int> kept;      // K
  std::vector<Axis> axes;     // on J, ascending order
  std::vector<int> outcomes;  // measured bits on J, ascending order
  ClassicalShadow shadow;     // on the K register
  double overlap = 0.0;       // omega-hat = Tr(shadow * |phi><phi|)
};

// One full run against a device state rho: E over all randomness of the
// returned overlap is Tr(rho Omega).  A device outcome with no target branch
// scores 0 exactly (the corresponding block of Omega is absent).
DpsoTrial dpso_trial(const DensityOperator& rho, const Target& target,
                     const SamplingPlan& plan, RngStream& rng);

// N = 2^{2r+1} ln(1/delta) / (nu^2 eps^2): the symmetric plan at the quoted
// single-trial range [a, b] = [0, 2^r].  The conservative variant uses the
// exact support of the single-trial estimator, [-2^{r-1}, 2^r], whose factors
// have eigenvalues {2, -1} per kept qubit.
long long dpso_sample_complexity(int level, const TestConfig& config,
                                 bool conservative = false);

struct DpsoParams {
  SamplingPlan plan;
  long long trials = 0;  // N
  TestConfig config;     // epsilon/delta (+ optional chi); nu is computed
};

// Run params.trials trials of the device stream and assess the mean against
// t0 = 1 - nu(Omega) eps / 2.  Trial i uses the stream for_trial(seed, i).
VerdictReport dpso_verify(const DeviceSource& device, const Target& target,
                          const DpsoParams& params, std::uint64_t seed);

// --- sampling-plan optimization ---------------------------------------------

enum class PlanMethod {
  grid,              // lattice over both simplices at the finest affordable resolution
  projected_ascent,  // finite-difference ascent on nu with simplex projection
  stabilizer_lp,     // measurement-game LP marginals (stabilizer targets only)
};

struct PlanSearchResult {
  SamplingPlan plan;
  double nu = 0.0;  // exact gap achieved by the returned plan
};

// Best plan found by the chosen method.  Every method also evaluates the two
// named plans, so the result is never worse than either uniform scheme.
PlanSearchResult optimize_plan(const Target& target, int level, PlanMethod method,
                               std::uint64_t seed = 0);

}  // namespace qsv
