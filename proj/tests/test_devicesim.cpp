#include <cmath>

#include "doctest.h"
#include "qsv/devicesim.hpp"
#include "qsv/pauli_string.hpp"
#include "qsv/target.hpp"
#include "test_helpers.hpp"

using namespace qsv;

namespace {

StrategyOperator bell_strategy() {
  const PureState bell = ghz(2).dense.state;
  const Matrix id = Matrix::Identity(4, 4);
  const Matrix zz = PauliString::from_string("+ZZ").dense();
  const Matrix xx = PauliString::from_string("+XX").dense();
  return build_strategy({BinaryTest(0.5 * (id + zz), 0.5), BinaryTest(0.5 * (id + xx), 0.5)},
                        bell);
}

}  // namespace

TEST_CASE("exact source emits the target projector") {
  const PureState psi = haar_random(2, 5).state;
  const DeviceSource device = DeviceSource::exact(psi);
  CHECK(device.kind() == DeviceSource::Kind::exact);
  CHECK(testing::max_abs_diff(device.emit().matrix,
                              Matrix(psi.amplitudes * psi.amplitudes.adjoint())) < 1e-12);
  CHECK(fidelity(device.emit(), psi) == doctest::Approx(1.0));
}

TEST_CASE("worst-case source sits exactly at the fidelity floor") {
  const PureState bell = ghz(2).dense.state;
  const StrategyOperator omega = bell_strategy();
  const double eps = 0.2;
  const DeviceSource device = DeviceSource::worst_case(bell, eps, omega);
  CHECK(device.kind() == DeviceSource::Kind::worst_case);

  // Fidelity 1 - eps, and the strategy passes it with probability 1 - nu*eps.
  CHECK(fidelity(device.emit(), bell) == doctest::Approx(1.0 - eps));
  const double pass = (omega.matrix * device.emit().matrix).trace().real();
  CHECK(pass == doctest::Approx(1.0 - omega.gap * eps));

  // Rank-two mixture with weights {1 - eps, eps}.
  const HermitianSpectrum spec = hermitian_eig(device.emit().matrix);
  CHECK(spec.eigenvalues(0) == doctest::Approx(1.0 - eps));
  CHECK(spec.eigenvalues(1) == doctest::Approx(eps));
  CHECK(std::abs(spec.eigenvalues(2)) < 1e-10);
  CHECK(std::abs(spec.eigenvalues(3)) < 1e-10);
}

TEST_CASE("worst-case source validates epsilon and the gap") {
  const PureState bell = ghz(2).dense.state;
  const StrategyOperator omega = bell_strategy();
  CHECK_THROWS_AS(DeviceSource::worst_case(bell, 0.0, omega), validation_error);
  CHECK_THROWS_AS(DeviceSource::worst_case(bell, 1.0, omega), validation_error);

  // A gapless strategy (identity) defines no worst case.
  const StrategyOperator flat =
      StrategyOperator::build(Matrix::Identity(4, 4), bell, StrategyKind::plm);
  CHECK(flat.gap == doctest::Approx(0.0));
  CHECK_THROWS_AS(DeviceSource::worst_case(bell, 0.2, flat), zero_gap_error);
}

TEST_CASE("depolarized source mixes in the maximally mixed state") {
  const PureState bell = ghz(2).dense.state;
  const double p = 0.4;
  const DeviceSource device = DeviceSource::depolarized(bell, p);
  const Matrix expect = 0.6 * (bell.amplitudes * bell.amplitudes.adjoint()) +
                        0.1 * Matrix::Identity(4, 4);
  CHECK(testing::max_abs_diff(device.emit().matrix, expect) < 1e-12);
  // F = (1 - p) + p/2^n.
  CHECK(fidelity(device.emit(), bell) == doctest::Approx(0.7));

  CHECK(fidelity(DeviceSource::depolarized(bell, 1.0).emit(), bell) == doctest::Approx(0.25));
  CHECK(fidelity(DeviceSource::depolarized(bell, 0.0).emit(), bell) == doctest::Approx(1.0));
  CHECK_THROWS_AS(DeviceSource::depolarized(bell, 1.2), validation_error);
  CHECK_THROWS_AS(DeviceSource::depolarized(bell, -0.1), validation_error);
}

TEST_CASE("fixed source passes through a caller-supplied state") {
  const DensityOperator rho = DensityOperator::from_pure(haar_random(2, 9).state);
  const DeviceSource device = DeviceSource::fixed(rho, "loaded");
  CHECK(device.kind() == DeviceSource::Kind::fixed);
  CHECK(device.description() == "loaded");
  CHECK(testing::max_abs_diff(device.emit().matrix, rho.matrix) < 1e-15);
}
