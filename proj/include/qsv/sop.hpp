#pragma once

#include <cstdint>
#include <vector>

#include "qsv/devicesim.hpp"
#include "qsv/hypotest.hpp"
#include "qsv/measurement.hpp"
#include "qsv/plm.hpp"
#include "qsv/target.hpp"

namespace qsv {

// ============================================================================
// Level-l shadow overlap protocol: keep a random subset K of at most l qubits,
// Z-measure the complement, shadow the K register, and score it against a
// projector assembled from target amplitudes on complement bit-string pairs.
// ============================================================================

struct SopParams {
  int level = 1;         // l: kept subsets have size 1..l (l <= n-1)
  long long trials = 0;  // N
  TestConfig config;     // epsilon/delta (+ optional chi); nu is computed
};

// Number of subsets with size 1..level: sum_i C(n, i).
long long subset_pool_size(int n, int level);

// Those subsets, ascending entries, ordered by size then lexicographically.
std::vector<std::vector<int>> enumerate_subsets(int n, int level);

// Uniform draw from the pool: size r with weight C(n, r), then a uniform
// size-r subset.
std::vector<int> sample_subset(int n, int level, RngStream& rng);

// The projector on the 2^|K| K-register for Z-outcomes z on the complement:
// one rank-1 term per unordered complement pair {b, ~b} of K bit strings
// (Hamming distance |K|), built from the target amplitudes at those strings.
// Pairs whose two amplitudes both vanish contribute nothing; if every pair
// vanishes the zero operator is returned.
Matrix build_L_z(const Target& target, const std::vector<int>& subset_k,
                 const std::vector<int>& z_bits);

// L = E_{K,z}[ |z><z| (x) L_z ] over the uniform subset pool and all z,
// embedded in global qubit order.  Satisfies 0 <= L <= I and L|psi> = |psi>.
StrategyOperator build_L(const Target& target, int level);

struct SopTrial {
  std::vector<int> subset;  // K
  std::vector<int> z_bits;  // Z outcomes on the complement, ascending order
  ClassicalShadow shadow;   // on the K register
  double overlap = 0.0;     // omega-hat = Tr(shadow * L_z)
};

// One full run against a device state rho: E over all randomness of the
// returned overlap is Tr(rho L).
SopTrial sop_trial(const DensityOperator& rho, const Target& target, int level, RngStream& rng);

// N = 2^{4l-1} ln(1/delta) / (nu^2 eps^2): the symmetric plan at the quoted
// single-trial range [a, b] = [0, 2^{2l-1}].
long long sop_sample_complexity(int level, const TestConfig& config);

// Run params.trials trials of the device stream and assess the mean against
// t0 = 1 - nu(L) eps / 2.  Trial i uses the stream for_trial(seed, i).
VerdictReport sop_verify(const DeviceSource& device, const Target& target,
                         const SopParams& params, std::uint64_t seed);

}  // namespace qsv
