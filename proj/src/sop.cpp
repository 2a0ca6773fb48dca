#include "qsv/sop.hpp"

#include <cmath>

#include "qsv/comb.hpp"

namespace qsv {

namespace {

// Amplitude pairs with squared norm below this are treated as absent.
constexpr double kPairTol = 1e-24;

void check_level(int n, int level, const char* where) {
  if (n < 2) throw validation_error(std::string(where) + ": need at least two qubits");
  if (level < 1 || level > n - 1) {
    throw validation_error(std::string(where) + ": level must lie in [1, n-1]");
  }
}

// Full-space basis index with sub-index a_bits on set_a and b_bits on set_b
// (each set ascending, sub-index MSB-first within the set).
long long compose_index(int n, const std::vector<int>& set_a, long long a_bits,
                        const std::vector<int>& set_b, long long b_bits) {
  long long index = 0;
  const int ra = static_cast<int>(set_a.size());
  for (int i = 0; i < ra; ++i) {
    index |= ((a_bits >> (ra - 1 - i)) & 1LL) << (n - set_a[i]);
  }
  const int rb = static_cast<int>(set_b.size());
  for (int i = 0; i < rb; ++i) {
    index |= ((b_bits >> (rb - 1 - i)) & 1LL) << (n - set_b[i]);
  }
  return index;
}

}  // namespace

long long subset_pool_size(int n, int level) {
  check_level(n, level, "subset_pool_size");
  long long total = 0;
  for (int r = 1; r <= level; ++r) total += binomial(n, r);
  return total;
}

std::vector<std::vector<int>> enumerate_subsets(int n, int level) {
  check_level(n, level, "enumerate_subsets");
  std::vector<std::vector<int>> pool;
  for (int r = 1; r <= level; ++r) {
    auto block = combinations(n, r);
    pool.insert(pool.end(), block.begin(), block.end());
  }
  return pool;
}

std::vector<int> sample_subset(int n, int level, RngStream& rng) {
  check_level(n, level, "sample_subset");
  std::vector<double> cumulative(level);
  double acc = 0.0;
  const double total = static_cast<double>(subset_pool_size(n, level));
  for (int r = 1; r <= level; ++r) {
    acc += static_cast<double>(binomial(n, r)) / total;
    cumulative[r - 1] = acc;
  }
  const int r = 1 + rng.categorical_from_cumulative(cumulative.data(), level);
  // Selection sampling: qubit q enters with probability need/remaining.
  std::vector<int> subset;
  subset.reserve(r);
  int need = r;
  for (int q = 1; q <= n && need > 0; ++q) {
    const int remaining = n - q + 1;
    if (rng.uniform() * remaining < need) {
      subset.push_back(q);
      --need;
    }
  }
  return subset;
}

Matrix build_L_z(const Target& target, const std::vector<int>& subset_k,
                 const std::vector<int>& z_bits) {
  const int n = target_qubits(target);
  const int r = static_cast<int>(subset_k.size());
  check_level(n, r, "build_L_z");
  const std::vector<int> comp = complement_of(n, subset_k);
  if (z_bits.size() != comp.size()) {
    throw validation_error("build_L_z: outcome count does not match the complement");
  }
  std::vector<int> full(n, 0);
  for (std::size_t j = 0; j < comp.size(); ++j) full[comp[j] - 1] = z_bits[j];

  const long long dim = 1LL << r;
  const long long mask = dim - 1;
  Matrix lz = Matrix::Zero(dim, dim);
  for (long long b = 0; 2 * b < mask; ++b) {
    const long long bc = mask - b;  // the complementary string, distance r away
    for (int i = 0; i < r; ++i) full[subset_k[i] - 1] = static_cast<int>((b >> (r - 1 - i)) & 1);
    const Complex amp1 = amplitude(target, full);
    for (int i = 0; i < r; ++i) full[subset_k[i] - 1] = static_cast<int>((bc >> (r - 1 - i)) & 1);
    const Complex amp2 = amplitude(target, full);
    const double norm2 = std::norm(amp1) + std::norm(amp2);
    if (norm2 < kPairTol) continue;
    Vector phi = Vector::Zero(dim);
    phi(b) = amp1;
    phi(bc) = amp2;
    phi /= std::sqrt(norm2);
    lz.noalias() += phi * phi.adjoint();
  }
  return lz;
}

StrategyOperator build_L(const Target& target, int level) {
  const int n = target_qubits(target);
  check_level(n, level, "build_L");
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (dim > dimension_cap()) throw capacity_error("build_L: dimension exceeds the cap");

  const auto pool = enumerate_subsets(n, level);
  Matrix full = Matrix::Zero(dim, dim);
  std::vector<int> zbits;
  for (const auto& subset : pool) {
    const std::vector<int> comp = complement_of(n, subset);
    const int r = static_cast<int>(subset.size());
    const int t = static_cast<int>(comp.size());
    zbits.assign(t, 0);
    for (long long zi = 0; zi < (1LL << t); ++zi) {
      for (int j = 0; j < t; ++j) zbits[j] = static_cast<int>((zi >> (t - 1 - j)) & 1);
      const Matrix lz = build_L_z(target, subset, zbits);
      for (long long row = 0; row < (1LL << r); ++row) {
        for (long long col = 0; col < (1LL << r); ++col) {
          if (lz(row, col) == Complex(0.0, 0.0)) continue;
          full(compose_index(n, subset, row, comp, zi),
               compose_index(n, subset, col, comp, zi)) += lz(row, col);
        }
      }
    }
  }
  full /= static_cast<double>(pool.size());
  return StrategyOperator::build(std::move(full), target_to_dense(target), StrategyKind::sop);
}

SopTrial sop_trial(const DensityOperator& rho, const Target& target, int level, RngStream& rng) {
  const int n = target_qubits(target);
  if (rho.n != n) throw validation_error("sop_trial: device/target qubit count mismatch");
  SopTrial trial;
  trial.subset = sample_subset(n, level, rng);
  const PauliLayout layout = z_layout_for_subset(n, trial.subset);
  const BornResult born = born_sample(rho, layout, rng);
  trial.z_bits = born.outcomes;
  trial.shadow = shadow_snapshot(born.reduced, rng);
  const Matrix lz = build_L_z(target, trial.subset, trial.z_bits);
  trial.overlap = (trial.shadow.materialize() * lz).trace().real();
  return trial;
}

long long sop_sample_complexity(int level, const TestConfig& config) {
  if (level < 1) throw validation_error("sop_sample_complexity: level must be >= 1");
  TestConfig scaled(config.epsilon, config.delta, config.nu, 0.0,
                    std::ldexp(1.0, 2 * level - 1));
  return simple_sample_complexity(scaled);
}

VerdictReport sop_verify(const DeviceSource& device, const Target& target,
                         const SopParams& params, std::uint64_t seed) {
  if (params.trials < 1) throw validation_error("sop_verify: need at least one trial");
  const StrategyOperator l_op = build_L(target, params.level);
  if (l_op.gap <= 0.0) {
    throw zero_gap_error("sop_verify: L is gapless for this target and level");
  }
  const double chi = params.config.chi > 0.0 ? params.config.chi : params.config.delta;
  TestConfig config(params.config.epsilon, params.config.delta, l_op.gap, 0.0,
                    std::ldexp(1.0, 2 * params.level - 1));
  config.with_chi(chi);
  const double t0 = default_threshold(l_op.gap, config.epsilon);
  const DensityOperator& rho = device.emit();
  double sum = 0.0;
  for (long long i = 0; i < params.trials; ++i) {
    RngStream rng = RngStream::for_trial(seed, static_cast<std::uint64_t>(i));
    sum += sop_trial(rho, target, params.level, rng).overlap;
  }
  return assess(config, sum / static_cast<double>(params.trials), params.trials, t0);
}

}  // namespace qsv
