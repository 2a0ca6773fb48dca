#pragma once

#include <cstdint>
#include <vector>

#include "qsv/linalg.hpp"
#include "qsv/rng.hpp"

namespace qsv {

// ============================================================================
// Pass/fail verification strategies: a strategy is a finite set of binary
// tests (projective pass conditions) drawn with fixed probabilities.  The
// strategy operator Omega = sum_j p_j E_j governs everything: it satisfies
// 0 <= Omega <= I, fixes the target state, and its spectral gap
// nu = 1 - lambda_2 sets the worst-case detection power.
// ============================================================================

struct BinaryTest {
  Matrix pass_projector;  // E_j: Hermitian projector that fixes the target
  double probability = 0.0;

  BinaryTest(Matrix projector, double probability);
};

enum class StrategyKind { plm, sop, dpso };

struct StrategyOperator {
  Matrix matrix;
  HermitianSpectrum spectrum;
  StrategyKind kind = StrategyKind::plm;
  double gap = 0.0;  // nu = 1 - lambda_2 (1 for one-dimensional spaces)

  // Validates 0 <= Omega <= I (eigenvalues within [-1e-9, 1 + 1e-9]) and
  // Omega |target> = |target> within 1e-8, then caches the spectrum and gap.
  static StrategyOperator build(Matrix omega, const PureState& target, StrategyKind kind);
};

// Assemble Omega = sum_j p_j E_j.  The probabilities must sum to 1 within
// 1e-10 and every E_j must be a projector fixing the target.
StrategyOperator build_strategy(const std::vector<BinaryTest>& tests, const PureState& target);

struct PlmVerdict {
  bool accepted = false;
  long long tests_run = 0;  // index of the failing test + 1, or N if all passed
};

// Run the sequential protocol: draw test j with probability p_j for each of
// `n_states` i.i.d. copies, pass copy i with probability Tr(E_j rho); reject
// on the first failure.
PlmVerdict plm_run(const DensityOperator& rho, long long n_states,
                   const std::vector<BinaryTest>& tests, RngStream& rng);

// N = ceil( ln(delta) / ln(1 - nu * epsilon) ).
long long plm_sample_complexity(double epsilon, double delta, double nu);

}  // namespace qsv
