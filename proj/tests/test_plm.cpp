#include <cmath>

#include "doctest.h"
#include "qsv/devicesim.hpp"
#include "qsv/plm.hpp"
#include "qsv/pauli_string.hpp"
#include "qsv/target.hpp"
#include "test_helpers.hpp"

using namespace qsv;

namespace {

// The two-test Bell strategy: check ZZ or XX parity with equal probability.
std::vector<BinaryTest> bell_tests() {
  const Matrix id = Matrix::Identity(4, 4);
  const Matrix zz = PauliString::from_string("+ZZ").dense();
  const Matrix xx = PauliString::from_string("+XX").dense();
  return {BinaryTest(0.5 * (id + zz), 0.5), BinaryTest(0.5 * (id + xx), 0.5)};
}

}  // namespace

TEST_CASE("sequential sample complexity spot values") {
  CHECK(plm_sample_complexity(0.2, 0.01, 0.5) == 44);   // nu*eps = 0.1
  CHECK(plm_sample_complexity(0.1, 0.01, 0.5) == 90);   // nu*eps = 0.05
  CHECK(plm_sample_complexity(0.999, 0.01, 1.0) == 1);  // near-orthogonal errors
  CHECK(plm_sample_complexity(0.5, 0.9, 1.0) == 1);     // clamped from below
  // Monotone: more infidelity to detect with the same budget needs fewer copies.
  CHECK(plm_sample_complexity(0.4, 0.01, 0.5) < plm_sample_complexity(0.2, 0.01, 0.5));
  CHECK_THROWS_AS(plm_sample_complexity(0.0, 0.01, 0.5), validation_error);
  CHECK_THROWS_AS(plm_sample_complexity(0.2, 1.5, 0.5), validation_error);
  CHECK_THROWS_AS(plm_sample_complexity(0.2, 0.01, 2.0), validation_error);
  CHECK_THROWS_AS(plm_sample_complexity(0.2, 0.01, 0.0), zero_gap_error);
}

TEST_CASE("Bell strategy operator has gap 1/2") {
  const PureState bell = ghz(2).dense.state;
  const StrategyOperator omega = build_strategy(bell_tests(), bell);
  CHECK(omega.gap == doctest::Approx(0.5));
  CHECK(omega.kind == StrategyKind::plm);
  // Spectrum {1, 1/2, 1/2, 0} in the Bell basis.
  CHECK(omega.spectrum.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(omega.spectrum.eigenvalues(1) == doctest::Approx(0.5));
  CHECK(omega.spectrum.eigenvalues(2) == doctest::Approx(0.5));
  CHECK(omega.spectrum.eigenvalues(3) == doctest::Approx(0.0));
  const Vector fixed = omega.matrix * bell.amplitudes;
  CHECK(testing::max_abs_diff(fixed, bell.amplitudes) < 1e-12);
}

TEST_CASE("strategy construction validates its inputs") {
  const PureState bell = ghz(2).dense.state;
  const Matrix id = Matrix::Identity(4, 4);
  const Matrix zz = PauliString::from_string("+ZZ").dense();

  // Not a projector.
  CHECK_THROWS_AS(BinaryTest(0.9 * 0.5 * (id + zz), 1.0), validation_error);
  // Not Hermitian.
  Matrix skew = Matrix::Zero(4, 4);
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS(BinaryTest(skew, 1.0), validation_error);

  // Probabilities off by more than the tolerance.
  std::vector<BinaryTest> bad = bell_tests();
  bad[0].probability = 0.6;
  CHECK_THROWS_AS(build_strategy(bad, bell), validation_error);

  // A test that fails the target with positive probability.
  const PureState plus_zero = haar_random(2, 1).state;
  CHECK_THROWS_AS(build_strategy(bell_tests(), plus_zero), construction_error);
}

TEST_CASE("exact devices always pass the sequential protocol") {
  const PureState bell = ghz(2).dense.state;
  const DensityOperator rho = DensityOperator::from_pure(bell);
  const auto tests = bell_tests();
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    RngStream rng = RngStream::for_trial(41, trial);
    const PlmVerdict verdict = plm_run(rho, 50, tests, rng);
    CHECK(verdict.accepted);
    CHECK(verdict.tests_run == 50);
  }
}

TEST_CASE("orthogonal-parity devices are rejected") {
  // |01> fails the ZZ test with certainty and the XX test half the time.
  const DensityOperator rho = DensityOperator::from_pure(PureState::basis_state(2, 1));
  const auto tests = bell_tests();
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    RngStream rng = RngStream::for_trial(42, trial);
    const PlmVerdict verdict = plm_run(rho, 200, tests, rng);
    CHECK_FALSE(verdict.accepted);
    CHECK(verdict.tests_run <= 200);
  }
}

TEST_CASE("worst-case devices pass at the (1 - nu eps)^N rate") {
  const PureState bell = ghz(2).dense.state;
  const auto tests = bell_tests();
  const StrategyOperator omega = build_strategy(tests, bell);
  const double eps = 0.2;
  const DeviceSource device = DeviceSource::worst_case(bell, eps, omega);
  // Per-copy pass probability is Tr(Omega rho) = 1 - nu*eps = 0.9.
  CHECK((omega.matrix * device.emit().matrix).trace().real() == doctest::Approx(0.9));

  const long long n_states = 5;
  const double p_accept = std::pow(1.0 - omega.gap * eps, static_cast<double>(n_states));
  int accepted = 0;
  const int m = 4000;
  for (std::uint64_t trial = 0; trial < m; ++trial) {
    RngStream rng = RngStream::for_trial(43, trial);
    if (plm_run(device.emit(), n_states, tests, rng).accepted) ++accepted;
  }
  // 3.5 sigma ~ 0.027 at m = 4000.
  CHECK(std::abs(accepted / static_cast<double>(m) - p_accept) < 0.03);
}

TEST_CASE("plm_run validates its inputs") {
  const DensityOperator rho = DensityOperator::from_pure(ghz(2).dense.state);
  RngStream rng(7);
  CHECK_THROWS_AS(plm_run(rho, 0, bell_tests(), rng), validation_error);
  CHECK_THROWS_AS(plm_run(rho, 10, {}, rng), validation_error);
}
