#include <cmath>

#include "doctest.h"
#include "qsv/hypotest.hpp"
#include "qsv/rng.hpp"

using namespace qsv;

TEST_CASE("default_threshold splits the separation interval") {
  CHECK(default_threshold(0.5, 0.2) == doctest::Approx(0.95));
  CHECK(default_threshold(1.0, 0.5) == doctest::Approx(0.75));
  CHECK(default_threshold(0.0, 0.3) == doctest::Approx(1.0));  // gapless: no finite test
  CHECK_THROWS_AS(default_threshold(0.5, 0.0), validation_error);
  CHECK_THROWS_AS(default_threshold(0.5, 1.0), validation_error);
  CHECK_THROWS_AS(default_threshold(-0.1, 0.5), validation_error);
  CHECK_THROWS_AS(default_threshold(1.1, 0.5), validation_error);
}

TEST_CASE("hoeffding_tail spot values and range scaling") {
  CHECK(hoeffding_tail(100, 0.1, 0.0, 1.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(hoeffding_tail(100, 0.0, 0.0, 1.0) == doctest::Approx(1.0));
  // Doubling the range is the same as halving the deviation.
  CHECK(hoeffding_tail(50, 0.2, -1.0, 1.0) == doctest::Approx(hoeffding_tail(50, 0.1, 0.0, 1.0)));
  CHECK_THROWS_AS(hoeffding_tail(0, 0.1, 0.0, 1.0), validation_error);
  CHECK_THROWS_AS(hoeffding_tail(10, 0.1, 1.0, 1.0), validation_error);
  CHECK_THROWS_AS(hoeffding_tail(10, -0.1, 0.0, 1.0), validation_error);
}

TEST_CASE("error_bounds at the midpoint threshold") {
  // nu*eps = 0.1, range 2, t0 = 0.95: both deviations are 0.05, both bounds
  // equal exp(-2*2000*0.0025/4) = exp(-2.5).
  const TestConfig config{0.2, 0.01, 0.5, -1.0, 1.0};
  const auto bounds = error_bounds(config, 0.95, 2000);
  CHECK(bounds.first == doctest::Approx(std::exp(-2.5)));
  CHECK(bounds.second == doctest::Approx(std::exp(-2.5)));

  // Raising t0 makes accepting a bad device harder (type I falls) and
  // rejecting the exact device easier (type II rises).
  const auto stricter = error_bounds(config, 0.97, 2000);
  CHECK(stricter.first < bounds.first);
  CHECK(stricter.second > bounds.second);

  CHECK_THROWS_AS(error_bounds(config, 0.90, 2000), validation_error);  // at the floor
  CHECK_THROWS_AS(error_bounds(config, 1.00, 2000), validation_error);
}

TEST_CASE("theorem1_plan symmetric-budget spot value") {
  // eps=0.5, nu=1, chi=delta=0.01, range 1:
  //   N  = ceil(4 ln(100) / 0.5) = ceil(36.841) = 37
  //   t0 = 1 - sqrt(ln(100)/74) = 0.7505365...
  const TestConfig config{0.5, 0.01, 1.0, 0.0, 1.0};
  const TestPlan plan = theorem1_plan(config);
  CHECK(plan.trials == 37);
  CHECK(plan.threshold == doctest::Approx(0.7505365167).epsilon(1e-8));
  // The planned threshold honors both budgets.
  const auto bounds = error_bounds(config, plan.threshold, plan.trials);
  CHECK(bounds.first <= config.delta * (1.0 + 1e-12));
  CHECK(bounds.second <= config.chi * (1.0 + 1e-12));
}

TEST_CASE("theorem1_plan asymmetric budgets") {
  TestConfig config{0.2, 0.1, 0.5, 0.0, 1.0};
  config.with_chi(0.01);
  const TestPlan plan = theorem1_plan(config);
  CHECK(plan.trials == 672);
  CHECK(plan.threshold == doctest::Approx(0.941464).epsilon(1e-5));
  const auto bounds = error_bounds(config, plan.threshold, plan.trials);
  CHECK(bounds.first <= config.delta * (1.0 + 1e-12));   // type I <= delta
  CHECK(bounds.second <= config.chi * (1.0 + 1e-12));    // type II <= chi
}

TEST_CASE("simple_sample_complexity spot value") {
  // eps=0.2, nu=0.5, delta=0.01, range 4: N = ceil(2*16*ln(100)/0.01) = 14737.
  const TestConfig config{0.2, 0.01, 0.5, 0.0, 4.0};
  CHECK(simple_sample_complexity(config) == 14737);
}

TEST_CASE("simple complexity equals the symmetric theorem plan after ceiling") {
  RngStream rng(2024);
  for (int i = 0; i < 100; ++i) {
    const double eps = 0.05 + 0.9 * rng.uniform();
    const double delta = 0.001 + 0.5 * rng.uniform();
    const double nu = 0.05 + 0.95 * rng.uniform();
    const double b = 0.5 + 15.5 * rng.uniform();
    const TestConfig config{eps, delta, nu, 0.0, b};
    CHECK(theorem1_plan(config).trials == simple_sample_complexity(config));
  }
}

TEST_CASE("assess accepts strictly above the threshold only") {
  const TestConfig config{0.2, 0.01, 0.5, 0.0, 1.0};
  const double t0 = 0.95;
  const VerdictReport at = assess(config, 0.95, 500, t0);
  CHECK_FALSE(at.accepted);  // the boundary rejects
  const VerdictReport above = assess(config, 0.9500001, 500, t0);
  CHECK(above.accepted);
  const VerdictReport below = assess(config, 0.80, 500, t0);
  CHECK_FALSE(below.accepted);
  CHECK(above.trials == 500);
  CHECK(above.mean == doctest::Approx(0.9500001));
  CHECK(above.threshold == doctest::Approx(t0));
  const auto bounds = error_bounds(config, t0, 500);
  CHECK(above.type1_bound == doctest::Approx(bounds.first));
  CHECK(above.type2_bound == doctest::Approx(bounds.second));
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(TestConfig(0.0, 0.1, 0.5, 0.0, 1.0), validation_error);
  CHECK_THROWS_AS(TestConfig(1.0, 0.1, 0.5, 0.0, 1.0), validation_error);
  CHECK_THROWS_AS(TestConfig(0.2, 0.0, 0.5, 0.0, 1.0), validation_error);
  CHECK_THROWS_AS(TestConfig(0.2, 1.0, 0.5, 0.0, 1.0), validation_error);
  CHECK_THROWS_AS(TestConfig(0.2, 0.1, 0.5, 1.0, 1.0), validation_error);  // empty range
  CHECK_THROWS_AS(TestConfig(0.2, 0.1, 1.5, 0.0, 1.0), validation_error);
  CHECK_THROWS_AS(TestConfig(0.2, 0.1, -0.5, 0.0, 1.0), validation_error);
  TestConfig config{0.2, 0.1, 0.5, 0.0, 1.0};
  CHECK_THROWS_AS(config.with_chi(0.0), validation_error);

  // nu = 0 is representable (a gapless strategy) but admits no finite plan.
  const TestConfig gapless{0.2, 0.1, 0.0, 0.0, 1.0};
  CHECK_THROWS_AS(theorem1_plan(gapless), zero_gap_error);
  CHECK_THROWS_AS(simple_sample_complexity(gapless), zero_gap_error);
}
