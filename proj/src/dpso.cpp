#include "qsv/dpso.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <utility>

#include "qsv/comb.hpp"
#include "qsv/stabilizer.hpp"

namespace qsv {

namespace {

// Branches with target probability below this are treated as absent.
constexpr double kBranchTol = 1e-24;

void check_level(int n, int level, const char* where) {
  if (n < 2) throw validation_error(std::string(where) + ": need at least two qubits");
  if (level < 1 || level > n - 1) {
    throw validation_error(std::string(where) + ": level must lie in [1, n-1]");
  }
}

long long pow3(int t) {
  long long v = 1;
  for (int i = 0; i < t; ++i) v *= 3;
  return v;
}

// All axis strings of length t in lexicographic order (X < Y < Z).
std::vector<std::string> all_axis_strings(int t) {
  const long long count = pow3(t);
  if (count > 1'000'000) {
    throw capacity_error("sampling plan: axis-string pool exceeds 10^6 entries");
  }
  std::vector<std::string> pool;
  pool.reserve(static_cast<std::size_t>(count));
  std::string s(static_cast<std::size_t>(t), 'X');
  for (long long idx = 0; idx < count; ++idx) {
    long long rem = idx;
    for (int pos = t - 1; pos >= 0; --pos) {
      s[pos] = "XYZ"[rem % 3];
      rem /= 3;
    }
    pool.push_back(s);
  }
  return pool;
}

// Lexicographic index of an axis string (inverse of all_axis_strings order).
long long axis_string_index(const std::string& s) {
  long long idx = 0;
  for (char c : s) {
    idx = idx * 3 + (c == 'X' ? 0 : c == 'Y' ? 1 : 2);
  }
  return idx;
}

std::vector<Axis> string_to_axes(const std::string& s) {
  std::vector<Axis> axes;
  axes.reserve(s.size());
  for (char c : s) axes.push_back(axis_from_letter(c));
  return axes;
}

void check_distribution(const std::vector<double>& probs, std::size_t want,
                        const char* what) {
  if (probs.size() != want) {
    throw validation_error(std::string("sampling plan: ") + what +
                           " probabilities do not match the pool");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (p < -1e-12 || !std::isfinite(p)) {
      throw validation_error(std::string("sampling plan: negative ") + what +
                             " probability");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw validation_error(std::string("sampling plan: ") + what +
                           " probabilities must sum to 1");
  }
}

// Euclidean projection onto the probability simplex.
void project_to_simplex(std::vector<double>& x) {
  std::vector<double> u(x);
  std::sort(u.rbegin(), u.rend());
  double running = 0.0, tau = 0.0;
  int support = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    running += u[i];
    const double candidate = (running - 1.0) / static_cast<double>(i + 1);
    if (u[i] - candidate > 0.0) {
      tau = candidate;
      support = static_cast<int>(i + 1);
    }
  }
  if (support == 0) {  // all mass clipped; fall back to uniform
    std::fill(x.begin(), x.end(), 1.0 / static_cast<double>(x.size()));
    return;
  }
  for (double& v : x) v = std::max(v - tau, 0.0);
}

// Pre-built Omega_{K,l} matrices for every (subset, axis string) pair of a
// level, so plan evaluations reduce to weighted sums.
struct OperatorBank {
  int n = 0;
  std::vector<std::vector<int>> subsets;
  std::vector<std::string> axis_strings;
  std::vector<Matrix> ops;  // ops[k * axis_strings.size() + l]
  PureState psi;

  const Matrix& at(std::size_t k, std::size_t l) const {
    return ops[k * axis_strings.size() + l];
  }
};

OperatorBank build_bank(const Target& target, int level) {
  const int n = target_qubits(target);
  check_level(n, level, "optimize_plan");
  OperatorBank bank;
  bank.n = n;
  bank.subsets = combinations(n, level);
  bank.axis_strings = all_axis_strings(n - level);
  const std::size_t pairs = bank.subsets.size() * bank.axis_strings.size();
  if (pairs > 4096) {
    throw capacity_error("optimize_plan: layout pool too large to enumerate");
  }
  bank.psi = target_to_dense(target);
  bank.ops.reserve(pairs);
  for (const auto& kept : bank.subsets) {
    for (const auto& s : bank.axis_strings) {
      bank.ops.push_back(build_test_operator(target, kept, string_to_axes(s)).matrix);
    }
  }
  return bank;
}

// Spectral gap of the plan (p, q) against the bank; distributions are
// normalized internally so finite-difference probes stay well defined.
double bank_gap(const OperatorBank& bank, const std::vector<double>& p,
                const std::vector<double>& q) {
  double psum = 0.0, qsum = 0.0;
  for (double v : p) psum += v;
  for (double v : q) qsum += v;
  if (psum <= 0.0 || qsum <= 0.0) return 0.0;
  const Eigen::Index dim = bank.ops.front().rows();
  Matrix omega = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < bank.subsets.size(); ++k) {
    if (p[k] <= 0.0) continue;
    for (std::size_t l = 0; l < bank.axis_strings.size(); ++l) {
      if (q[l] <= 0.0) continue;
      omega.noalias() += (p[k] / psum) * (q[l] / qsum) * bank.at(k, l);
    }
  }
  const HermitianSpectrum spec = hermitian_eig(omega);
  if (spec.eigenvalues.size() < 2) return 1.0;
  return std::clamp(1.0 - spec.eigenvalues(1), 0.0, 1.0);
}

SamplingPlan assemble_plan(const OperatorBank& bank, int level, std::vector<double> p,
                           std::vector<double> q) {
  double psum = 0.0, qsum = 0.0;
  for (double v : p) psum += v;
  for (double v : q) qsum += v;
  for (double& v : p) v /= psum;
  for (double& v : q) v /= qsum;
  SamplingPlan plan;
  plan.n = bank.n;
  plan.level = level;
  plan.subsets = bank.subsets;
  plan.subset_probs = std::move(p);
  plan.axis_strings = bank.axis_strings;
  plan.axis_probs = std::move(q);
  plan.validate();
  return plan;
}

// All compositions of `total` into `cells` nonnegative parts.
void for_each_composition(int total, int cells,
                          const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> buf(static_cast<std::size_t>(cells), 0);
  const std::function<void(int, int)> recurse = [&](int pos, int remaining) {
    if (pos == cells - 1) {
      buf[static_cast<std::size_t>(pos)] = remaining;
      visit(buf);
      return;
    }
    for (int take = 0; take <= remaining; ++take) {
      buf[static_cast<std::size_t>(pos)] = take;
      recurse(pos + 1, remaining - take);
    }
  };
  recurse(0, total);
}

double lattice_size(int total, int cells) {
  double v = 1.0;
  for (int i = 1; i < cells; ++i) {
    v *= static_cast<double>(total + i) / static_cast<double>(i);
  }
  return v;
}

}  // namespace

// ============================================================================
// Sampling plans
// ============================================================================

void SamplingPlan::validate() const {
  check_level(n, level, "sampling plan");
  if (subsets.empty()) throw validation_error("sampling plan: no subsets");
  std::set<std::vector<int>> seen;
  for (const auto& kept : subsets) {
    if (static_cast<int>(kept.size()) != level) {
      throw validation_error("sampling plan: subset size differs from the level");
    }
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (kept[i] < 1 || kept[i] > n || (i > 0 && kept[i] <= kept[i - 1])) {
        throw validation_error("sampling plan: subsets must be ascending within [1, n]");
      }
    }
    if (!seen.insert(kept).second) {
      throw validation_error("sampling plan: duplicate subset");
    }
  }
  const int t = n - level;
  std::set<std::string> seen_strings;
  for (const auto& s : axis_strings) {
    if (static_cast<int>(s.size()) != t) {
      throw validation_error("sampling plan: axis string length differs from n - level");
    }
    for (char c : s) {
      if (c != 'X' && c != 'Y' && c != 'Z') {
        throw validation_error("sampling plan: axis letters must be X, Y or Z");
      }
    }
    if (!seen_strings.insert(s).second) {
      throw validation_error("sampling plan: duplicate axis string");
    }
  }
  check_distribution(subset_probs, subsets.size(), "subset");
  check_distribution(axis_probs, axis_strings.size(), "axis");
}

SamplingPlan SamplingPlan::naive_uniform(int n, int level) {
  check_level(n, level, "naive_uniform");
  SamplingPlan plan;
  plan.n = n;
  plan.level = level;
  plan.subsets = combinations(n, level);
  plan.subset_probs.assign(plan.subsets.size(), 1.0 / static_cast<double>(plan.subsets.size()));
  plan.axis_strings = all_axis_strings(n - level);
  plan.axis_probs.assign(plan.axis_strings.size(),
                         1.0 / static_cast<double>(plan.axis_strings.size()));
  return plan;
}

SamplingPlan SamplingPlan::ghz_class_uniform(int n, int level) {
  SamplingPlan plan = naive_uniform(n, level);
  const int t = n - level;
  std::vector<double> factorial(static_cast<std::size_t>(t) + 1, 1.0);
  for (int i = 1; i <= t; ++i) {
    factorial[static_cast<std::size_t>(i)] = factorial[static_cast<std::size_t>(i - 1)] * i;
  }
  const double scale =
      2.0 / (factorial[static_cast<std::size_t>(t)] * (t + 1.0) * (t + 2.0));
  for (std::size_t i = 0; i < plan.axis_strings.size(); ++i) {
    int counts[3] = {0, 0, 0};
    for (char c : plan.axis_strings[i]) ++counts[c == 'X' ? 0 : c == 'Y' ? 1 : 2];
    plan.axis_probs[i] = scale * factorial[static_cast<std::size_t>(counts[0])] *
                         factorial[static_cast<std::size_t>(counts[1])] *
                         factorial[static_cast<std::size_t>(counts[2])];
  }
  return plan;
}

// ============================================================================
// Test operators
// ============================================================================

DpsoTestOperator build_test_operator(const Target& target, const std::vector<int>& kept,
                                     const std::vector<Axis>& axes) {
  const int n = target_qubits(target);
  const int r = static_cast<int>(kept.size());
  check_level(n, r, "build_test_operator");
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (dim > dimension_cap()) {
    throw capacity_error("build_test_operator: dimension exceeds the cap");
  }
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i] < 1 || kept[i] > n || (i > 0 && kept[i] <= kept[i - 1])) {
      throw validation_error("build_test_operator: kept set must be ascending within [1, n]");
    }
  }
  const std::vector<int> measured = complement_of(n, kept);
  const int t = static_cast<int>(measured.size());
  if (static_cast<int>(axes.size()) != t) {
    throw validation_error("build_test_operator: need one axis per measured qubit");
  }

  DpsoTestOperator op;
  op.kept = kept;
  op.axes = axes;
  op.layout = PauliLayout(n, measured, axes);
  op.matrix = Matrix::Zero(dim, dim);

  std::vector<int> zbits(static_cast<std::size_t>(t), 0);
  for (long long z = 0; z < (1LL << t); ++z) {
    for (int j = 0; j < t; ++j) {
      zbits[static_cast<std::size_t>(j)] = static_cast<int>((z >> (t - 1 - j)) & 1);
    }
    const double pz = outcome_probability(target, op.layout, zbits);
    if (pz < kBranchTol) continue;  // vanishing branches are absent
    const PureState phi = post_measurement_target(target, op.layout, zbits);
    Vector sz = Vector::Ones(1);
    for (int j = 0; j < t; ++j) {
      sz = tensor_product(sz, Vector(axis_eigenstate(axes[static_cast<std::size_t>(j)],
                                                     zbits[static_cast<std::size_t>(j)])));
    }
    const Vector branch = embed_product_vector(n, measured, sz, kept, phi.amplitudes);
    op.matrix.noalias() += branch * branch.adjoint();
    op.outcomes.push_back(z);
    op.branch_states.push_back(phi);
    op.branch_probs.push_back(pz);
  }

  // Orthogonal |s_z> factors make the branch sum a projector, and the target
  // decomposes exactly over its surviving branches.
  const PureState psi = target_to_dense(target);
  const double projector_drift = (op.matrix * op.matrix - op.matrix).cwiseAbs().maxCoeff();
  const double fixation_drift =
      (op.matrix * psi.amplitudes - psi.amplitudes).cwiseAbs().maxCoeff();
  if (projector_drift > 1e-9 || fixation_drift > 1e-9) {
    throw construction_error(
        "build_test_operator: assembled operator is not a projector fixing the target");
  }
  return op;
}

StrategyOperator build_strategy_operator(const Target& target, const SamplingPlan& plan) {
  plan.validate();
  const int n = target_qubits(target);
  if (plan.n != n) {
    throw validation_error("build_strategy_operator: plan/target qubit count mismatch");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (dim > dimension_cap()) {
    throw capacity_error("build_strategy_operator: dimension exceeds the cap");
  }
  Matrix omega = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < plan.subsets.size(); ++k) {
    if (plan.subset_probs[k] <= 0.0) continue;
    for (std::size_t l = 0; l < plan.axis_strings.size(); ++l) {
      if (plan.axis_probs[l] <= 0.0) continue;
      const DpsoTestOperator op =
          build_test_operator(target, plan.subsets[k], string_to_axes(plan.axis_strings[l]));
      omega.noalias() += plan.subset_probs[k] * plan.axis_probs[l] * op.matrix;
    }
  }
  return StrategyOperator::build(std::move(omega), target_to_dense(target), StrategyKind::dpso);
}

// ============================================================================
// Trials and verdicts
// ============================================================================

DpsoTrial dpso_trial(const DensityOperator& rho, const Target& target,
                     const SamplingPlan& plan, RngStream& rng) {
  const int n = target_qubits(target);
  if (rho.n != n) throw validation_error("dpso_trial: device/target qubit count mismatch");
  if (plan.n != n) throw validation_error("dpso_trial: plan/target qubit count mismatch");
  if (plan.subsets.empty() || plan.axis_strings.empty()) {
    throw validation_error("dpso_trial: empty sampling plan");
  }

  std::vector<double> cumulative(plan.subset_probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < plan.subset_probs.size(); ++i) {
    acc += plan.subset_probs[i];
    cumulative[i] = acc;
  }
  const int k = rng.categorical_from_cumulative(cumulative.data(),
                                                static_cast<int>(cumulative.size()));
  cumulative.assign(plan.axis_probs.size(), 0.0);
  acc = 0.0;
  for (std::size_t i = 0; i < plan.axis_probs.size(); ++i) {
    acc += plan.axis_probs[i];
    cumulative[i] = acc;
  }
  const int l = rng.categorical_from_cumulative(cumulative.data(),
                                                static_cast<int>(cumulative.size()));

  DpsoTrial trial;
  trial.kept = plan.subsets[static_cast<std::size_t>(k)];
  trial.axes = string_to_axes(plan.axis_strings[static_cast<std::size_t>(l)]);
  const PauliLayout layout(n, complement_of(n, trial.kept), trial.axes);
  const BornResult born = born_sample(rho, layout, rng);
  trial.outcomes = born.outcomes;
  trial.shadow = shadow_snapshot(born.reduced, rng);
  try {
    const PureState phi = post_measurement_target(target, layout, trial.outcomes);
    trial.overlap = shadow_overlap(trial.shadow, phi);
  } catch (const zero_branch_error&) {
    // The device produced an outcome the target never does; that branch is
    // absent from Omega_{K,l}, so the trial scores exactly zero.
    trial.overlap = 0.0;
  }
  return trial;
}

long long dpso_sample_complexity(int level, const TestConfig& config, bool conservative) {
  if (level < 1) throw validation_error("dpso_sample_complexity: level must be >= 1");
  const double top = std::ldexp(1.0, level);
  const double bottom = conservative ? -std::ldexp(1.0, level - 1) : 0.0;
  TestConfig scaled(config.epsilon, config.delta, config.nu, bottom, top);
  return simple_sample_complexity(scaled);
}

VerdictReport dpso_verify(const DeviceSource& device, const Target& target,
                          const DpsoParams& params, std::uint64_t seed) {
  if (params.trials < 1) throw validation_error("dpso_verify: need at least one trial");
  params.plan.validate();
  const StrategyOperator omega = build_strategy_operator(target, params.plan);
  if (omega.gap <= 0.0) {
    throw zero_gap_error("dpso_verify: Omega is gapless for this target and plan");
  }
  const double chi = params.config.chi > 0.0 ? params.config.chi : params.config.delta;
  TestConfig config(params.config.epsilon, params.config.delta, omega.gap, 0.0,
                    std::ldexp(1.0, params.plan.level));
  config.with_chi(chi);
  const double t0 = default_threshold(omega.gap, config.epsilon);
  const DensityOperator& rho = device.emit();
  double sum = 0.0;
  for (long long i = 0; i < params.trials; ++i) {
    RngStream rng = RngStream::for_trial(seed, static_cast<std::uint64_t>(i));
    sum += dpso_trial(rho, target, params.plan, rng).overlap;
  }
  return assess(config, sum / static_cast<double>(params.trials), params.trials, t0);
}

// ============================================================================
// Plan optimization
// ============================================================================

PlanSearchResult optimize_plan(const Target& target, int level, PlanMethod method,
                               std::uint64_t seed) {
  const OperatorBank bank = build_bank(target, level);
  const std::size_t dp = bank.subsets.size();
  const std::size_t dq = bank.axis_strings.size();

  std::vector<double> best_p, best_q;
  double best_nu = -1.0;
  const auto consider = [&](const std::vector<double>& p, const std::vector<double>& q) {
    const double nu = bank_gap(bank, p, q);
    if (nu > best_nu) {
      best_nu = nu;
      best_p = p;
      best_q = q;
    }
    return nu;
  };

  // The two named plans anchor every method.
  const SamplingPlan naive = SamplingPlan::naive_uniform(bank.n, level);
  const SamplingPlan classes = SamplingPlan::ghz_class_uniform(bank.n, level);
  consider(naive.subset_probs, naive.axis_probs);
  consider(classes.subset_probs, classes.axis_probs);

  if (method == PlanMethod::grid) {
    int resolution = 0;
    for (int k = 1; k <= 16; ++k) {
      if (lattice_size(k, static_cast<int>(dp)) * lattice_size(k, static_cast<int>(dq)) <=
          2000.0) {
        resolution = k;
      } else {
        break;
      }
    }
    if (resolution > 0) {
      std::vector<std::vector<double>> p_points, q_points;
      for_each_composition(resolution, static_cast<int>(dp), [&](const std::vector<int>& c) {
        std::vector<double> p(dp);
        for (std::size_t i = 0; i < dp; ++i) p[i] = static_cast<double>(c[i]) / resolution;
        p_points.push_back(std::move(p));
      });
      for_each_composition(resolution, static_cast<int>(dq), [&](const std::vector<int>& c) {
        std::vector<double> q(dq);
        for (std::size_t i = 0; i < dq; ++i) q[i] = static_cast<double>(c[i]) / resolution;
        q_points.push_back(std::move(q));
      });
      for (const auto& p : p_points) {
        for (const auto& q : q_points) consider(p, q);
      }
    }
  } else if (method == PlanMethod::projected_ascent) {
    constexpr int kRestarts = 10;
    constexpr int kIterations = 200;
    constexpr double kStep = 1e-4;
    RngStream rng(seed, {0x706c616eULL});  // dedicated sub-stream per optimizer run
    for (int restart = 0; restart < kRestarts; ++restart) {
      std::vector<double> p(dp), q(dq);
      if (restart == 0) {
        p = naive.subset_probs;
        q = naive.axis_probs;
      } else if (restart == 1) {
        p = classes.subset_probs;
        q = classes.axis_probs;
      } else {
        for (double& v : p) v = -std::log(1.0 - rng.uniform());
        for (double& v : q) v = -std::log(1.0 - rng.uniform());
        project_to_simplex(p);
        project_to_simplex(q);
      }
      double current = consider(p, q);
      double eta = 0.25;
      for (int iter = 0; iter < kIterations && eta > 1e-6; ++iter) {
        std::vector<double> gp(dp), gq(dq);
        for (std::size_t i = 0; i < dp; ++i) {
          std::vector<double> probe = p;
          probe[i] += kStep;
          gp[i] = (bank_gap(bank, probe, q) - current) / kStep;
        }
        for (std::size_t i = 0; i < dq; ++i) {
          std::vector<double> probe = q;
          probe[i] += kStep;
          gq[i] = (bank_gap(bank, p, probe) - current) / kStep;
        }
        std::vector<double> np = p, nq = q;
        for (std::size_t i = 0; i < dp; ++i) np[i] += eta * gp[i];
        for (std::size_t i = 0; i < dq; ++i) nq[i] += eta * gq[i];
        project_to_simplex(np);
        project_to_simplex(nq);
        const double next = consider(np, nq);
        if (next > current + 1e-12) {
          p = std::move(np);
          q = std::move(nq);
          current = next;
        } else {
          eta *= 0.5;
        }
      }
    }
  } else {  // PlanMethod::stabilizer_lp
    const auto* stabilizer = std::get_if<StabilizerTarget>(&target);
    if (stabilizer == nullptr) {
      throw validation_error("optimize_plan: stabilizer-lp needs a stabilizer target");
    }
    const LpGapOptimum lp =
        lp_optimize(StabilizerGroup(stabilizer->generators), bank.n - level);
    std::map<std::vector<int>, std::size_t> subset_index;
    for (std::size_t i = 0; i < dp; ++i) subset_index[bank.subsets[i]] = i;
    // The LP optimum lives on joint patterns; project it to its two marginals
    // to obtain a product plan of the kind this protocol can execute.
    std::vector<double> p(dp, 0.0), q(dq, 0.0);
    for (std::size_t m = 0; m < lp.measurements.size(); ++m) {
      const SymplecticVector& mu = lp.measurements[m];
      const std::vector<int> kept = complement_of(bank.n, mu.support());
      std::string letters;
      for (int j : mu.support()) letters.push_back(axis_letter(mu.axis_at(j)));
      p[subset_index.at(kept)] += lp.p[m];
      q[static_cast<std::size_t>(axis_string_index(letters))] += lp.p[m];
    }
    consider(p, q);
  }

  PlanSearchResult result;
  result.plan = assemble_plan(bank, level, std::move(best_p), std::move(best_q));
  result.nu = best_nu;
  return result;
}

}  // namespace qsv
