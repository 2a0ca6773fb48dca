#include "qsv/hypotest.hpp"

#include <cmath>
#include <string>

namespace qsv {

namespace {

void check_unit_interval(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0)) {
    throw validation_error(std::string(name) + " must lie in (0,1), got " + std::to_string(x));
  }
}

// (sqrt(l1) + sqrt(l2))^2 without the double rounding that would break exact
// agreement with the symmetric formula when l1 == l2.
double squared_sum_of_roots(double l1, double l2) {
  if (l1 == l2) return 4.0 * l1;
  return l1 + l2 + 2.0 * std::sqrt(l1 * l2);
}

long long ceil_to_count(double x, const char* what) {
  if (!std::isfinite(x) || x < 0.0) {
    throw validation_error(std::string(what) + ": trial count is not finite");
  }
  if (x > 9.0e18) throw validation_error(std::string(what) + ": trial count overflows");
  const long long n = static_cast<long long>(std::ceil(x));
  return n > 0 ? n : 1;
}

}  // namespace

TestConfig::TestConfig(double epsilon_, double delta_, double nu_, double a_, double b_)
    : epsilon(epsilon_), delta(delta_), chi(delta_), a(a_), b(b_), nu(nu_) {
  validate();
}

TestConfig& TestConfig::with_chi(double chi_) {
  chi = chi_;
  validate();
  return *this;
}

void TestConfig::validate() const {
  check_unit_interval(epsilon, "epsilon");
  check_unit_interval(delta, "delta");
  check_unit_interval(chi, "chi");
  if (!(a < b)) throw validation_error("TestConfig: need a < b");
  if (!(nu >= 0.0 && nu <= 1.0)) throw validation_error("TestConfig: nu must lie in [0,1]");
}

double default_threshold(double nu, double epsilon) {
  check_unit_interval(epsilon, "epsilon");
  if (!(nu >= 0.0 && nu <= 1.0)) throw validation_error("default_threshold: nu outside [0,1]");
  return 1.0 - 0.5 * nu * epsilon;
}

double hoeffding_tail(long long n_trials, double deviation, double a, double b) {
  if (n_trials < 1) throw validation_error("hoeffding_tail: need N >= 1");
  if (!(a < b)) throw validation_error("hoeffding_tail: need a < b");
  if (deviation < 0.0) throw validation_error("hoeffding_tail: deviation must be >= 0");
  const double r = b - a;
  return std::exp(-2.0 * static_cast<double>(n_trials) * deviation * deviation / (r * r));
}

std::pair<double, double> error_bounds(const TestConfig& config, double t0, long long n_trials) {
  config.validate();
  const double floor = 1.0 - config.nu * config.epsilon;
  if (!(t0 > floor && t0 < 1.0)) {
    throw validation_error("error_bounds: threshold " + std::to_string(t0) +
                           " outside (1 - nu*eps, 1)");
  }
  const double type1 = hoeffding_tail(n_trials, t0 - floor, config.a, config.b);
  const double type2 = hoeffding_tail(n_trials, 1.0 - t0, config.a, config.b);
  return {type1, type2};
}

TestPlan theorem1_plan(const TestConfig& config) {
  config.validate();
  if (config.nu <= 0.0) throw zero_gap_error("theorem1_plan: nu = 0 leaves no separation");
  const double l_chi = std::log(1.0 / config.chi);
  const double l_delta = std::log(1.0 / config.delta);
  const double r = config.range();
  const double s2 = squared_sum_of_roots(l_chi, l_delta);
  const double denom = 2.0 * config.nu * config.nu * config.epsilon * config.epsilon;
  TestPlan plan;
  plan.trials = ceil_to_count(r * r * s2 / denom, "theorem1_plan");
  plan.threshold = 1.0 - r * std::sqrt(l_chi / (2.0 * static_cast<double>(plan.trials)));
  return plan;
}

long long simple_sample_complexity(const TestConfig& config) {
  config.validate();
  if (config.nu <= 0.0) throw zero_gap_error("simple_sample_complexity: nu = 0");
  const double r = config.range();
  const double s2 = 4.0 * std::log(1.0 / config.delta);
  const double denom = 2.0 * config.nu * config.nu * config.epsilon * config.epsilon;
  return ceil_to_count(r * r * s2 / denom, "simple_sample_complexity");
}

VerdictReport assess(const TestConfig& config, double mean, long long n_trials, double t0) {
  VerdictReport report;
  report.trials = n_trials;
  report.mean = mean;
  report.threshold = t0;
  report.accepted = mean > t0;  // the boundary omega_a == t0 rejects
  const auto bounds = error_bounds(config, t0, n_trials);
  report.type1_bound = bounds.first;
  report.type2_bound = bounds.second;
  return report;
}

}  // namespace qsv
