#pragma once

#include <cstdint>
#include <utility>

#include "qsv/errors.hpp"

namespace qsv {

// ============================================================================
// One-sided mean test between
//   H0: the device emits the target exactly   (per-trial mean 1)
//   H1: every emitted state has fidelity <= 1 - epsilon
//       (per-trial mean <= 1 - nu * epsilon).
// The estimator average omega_a is compared against a threshold t0; Hoeffding
// bounds on a per-trial range [a, b] control both error probabilities.
// ============================================================================

struct TestConfig {
  double epsilon = 0.0;  // infidelity scale, in (0,1)
  double delta = 0.0;    // type-I budget (accepting a bad device), in (0,1)
  double chi = 0.0;      // type-II budget (rejecting the exact device); defaults to delta
  double a = 0.0;        // per-trial estimator range [a, b]
  double b = 1.0;
  double nu = 0.0;       // spectral gap of the strategy operator, in (0,1]

  TestConfig() = default;
  TestConfig(double epsilon, double delta, double nu, double a, double b);
  TestConfig& with_chi(double chi);

  double range() const { return b - a; }
  void validate() const;
};

struct TestPlan {
  double threshold = 0.0;     // t0
  long long trials = 0;       // N
};

struct VerdictReport {
  long long trials = 0;
  double mean = 0.0;          // omega_a
  double threshold = 0.0;     // t0
  bool accepted = false;      // accept H0 iff mean > threshold (boundary rejects)
  double type1_bound = 0.0;
  double type2_bound = 0.0;
};

// t0 = 1 - nu * epsilon / 2 (the chi = delta threshold).  nu = 0 degenerates
// to t0 = 1, at which point no finite test separates the hypotheses.
double default_threshold(double nu, double epsilon);

// exp(-2 N t^2 / (b - a)^2) for a deviation t of the empirical mean.
double hoeffding_tail(long long n_trials, double deviation, double a, double b);

// (type-I, type-II) bounds at threshold t0; requires 1 - nu*eps < t0 < 1.
// Type I (accept a fidelity <= 1-eps device) decays with t0 - (1 - nu*eps);
// type II (reject the exact device) decays with 1 - t0, so raising t0 lowers
// the first bound and raises the second.
std::pair<double, double> error_bounds(const TestConfig& config, double t0, long long n_trials);

// Optimal-threshold plan for asymmetric budgets delta (type I) and chi
// (type II):
//   N  = ceil( (b-a)^2 (sqrt(ln 1/chi) + sqrt(ln 1/delta))^2 / (2 nu^2 eps^2) )
//   t0 = 1 - (b-a) sqrt(ln(1/chi) / (2N)).
TestPlan theorem1_plan(const TestConfig& config);

// Symmetric-budget trial count: N = ceil(2 (b-a)^2 ln(1/delta) / (nu^2 eps^2)).
// Agrees exactly (after ceil) with theorem1_plan when chi == delta.
long long simple_sample_complexity(const TestConfig& config);

// Assemble the verdict for an observed mean over N trials at threshold t0.
VerdictReport assess(const TestConfig& config, double mean, long long n_trials, double t0);

}  // namespace qsv
