#include "doctest.h"
#include "qsv/errors.hpp"
#include "qsv/linalg.hpp"
#include "qsv/rng.hpp"
#include "test_helpers.hpp"

using namespace qsv;
using qsv::testing::check_close;
using qsv::testing::max_abs_diff;

namespace {

Matrix random_matrix(int dim, RngStream& rng) {
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(rng.gaussian(), rng.gaussian());
  }
  return m;
}

Matrix random_hermitian(int dim, RngStream& rng) {
  const Matrix m = random_matrix(dim, rng);
  return 0.5 * (m + m.adjoint());
}

Matrix pauli_z() {
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

}  // namespace

TEST_CASE("qubit ordering: qubit 1 is the most significant bit") {
  // |10> = basis index 2 for n=2: qubit 1 reads 1, qubit 2 reads 0.
  CHECK(bit_of(2, 2, 1) == 1);
  CHECK(bit_of(2, 2, 2) == 0);
  CHECK(sub_index(0b101, 3, {1, 3}) == 0b11);
  CHECK(sub_index(0b101, 3, {2}) == 0);
}

TEST_CASE("tensor_product on matrices") {
  const Matrix id2 = Matrix::Identity(2, 2);
  check_close(tensor_product(id2, id2), Matrix::Identity(4, 4), 0.0, "I (x) I");

  // (Z (x) Z)|11> = +|11>.
  const Matrix zz = tensor_product(pauli_z(), pauli_z());
  Vector v11 = Vector::Zero(4);
  v11(3) = 1.0;
  check_close(Vector(zz * v11), v11, 0.0, "ZZ fixes |11>");

  // Shadow factor for outcome |0>: 3|0><0| - I = diag(2,-1); its square-free
  // tensor square is diag(4,-2,-2,1).
  Matrix f(2, 2);
  f << 2, 0, 0, -1;
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = 4;
  expect(1, 1) = -2;
  expect(2, 2) = -2;
  expect(3, 3) = 1;
  check_close(tensor_product(f, f), expect, 0.0, "shadow factor tensor square");
}

TEST_CASE("tensor_product respects the dimension cap") {
  const int old_cap = dimension_cap();
  dimension_cap() = 8;
  const Matrix id4 = Matrix::Identity(4, 4);
  CHECK_THROWS_AS(tensor_product(id4, id4), capacity_error);
  const Vector v = Vector::Ones(4) / 2.0;
  CHECK_THROWS_AS(tensor_product(v, v), capacity_error);
  dimension_cap() = old_cap;
}

TEST_CASE("partial_trace basics") {
  // Tr_2 |00><00| = |0><0|.
  Matrix rho = Matrix::Zero(4, 4);
  rho(0, 0) = 1.0;
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = 1.0;
  check_close(partial_trace(rho, 2, {1}), expect, 0.0, "keep qubit 1");

  // Empty keep list returns the 1x1 full trace.
  const Matrix tr = partial_trace(rho, 2, {});
  CHECK(tr.rows() == 1);
  CHECK(std::abs(tr(0, 0) - Complex(1.0, 0.0)) == 0.0);
}

TEST_CASE("partial_trace of GHZ_3 down to one qubit is maximally mixed") {
  Vector amps = Vector::Zero(8);
  amps(0) = amps(7) = 1.0 / std::sqrt(2.0);
  const Matrix rho = amps * amps.adjoint();
  Matrix expect(2, 2);
  expect << 0.5, 0, 0, 0.5;
  check_close(partial_trace(rho, 3, {3}), expect, 1e-15, "Tr_{1,2} GHZ_3");
  check_close(partial_trace(rho, 3, {1}), expect, 1e-15, "Tr_{2,3} GHZ_3");
}

TEST_CASE("partial_trace properties on random operators") {
  RngStream rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix m = random_matrix(8, rng);
    // Trace is preserved by any partial trace chain.
    const Complex full = m.trace();
    for (const std::vector<int>& keep :
         {std::vector<int>{1}, std::vector<int>{2}, std::vector<int>{1, 3}}) {
      CHECK(std::abs(partial_trace(m, 3, keep).trace() - full) < 1e-12);
    }
    // Tracing out B from A (x) B leaves trace(B) * A.
    const Matrix a = random_matrix(2, rng);
    const Matrix b = random_matrix(4, rng);
    check_close(partial_trace(tensor_product(a, b), 3, {1}), Matrix(b.trace() * a), 1e-12,
                "kron reduction");
  }
}

TEST_CASE("hermitian_eig on Pauli Z and random Hermitians") {
  const HermitianSpectrum s = hermitian_eig(pauli_z());
  CHECK(s.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.eigenvalues(1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(s.eigenvectors(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(s.eigenvectors(1, 1)) == doctest::Approx(1.0).epsilon(1e-12));

  RngStream rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix a = random_hermitian(16, rng);
    const HermitianSpectrum sp = hermitian_eig(a);
    for (int i = 1; i < 16; ++i) CHECK(sp.eigenvalues(i - 1) >= sp.eigenvalues(i));
    const Matrix recon =
        sp.eigenvectors * sp.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
        sp.eigenvectors.adjoint();
    CHECK(max_abs_diff(recon, a) < 1e-10);
    CHECK(max_abs_diff(Matrix(sp.eigenvectors.adjoint() * sp.eigenvectors),
                       Matrix::Identity(16, 16)) < 1e-10);
  }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(hermitian_eig(m), validation_error);
}

TEST_CASE("spectral_gap") {
  HermitianSpectrum s;
  s.eigenvalues = RealVector(3);
  s.eigenvalues << 1.0, 0.25, 0.0;
  s.eigenvectors = Matrix::Identity(3, 3);
  CHECK(spectral_gap(s) == doctest::Approx(0.75).epsilon(1e-15));

  // Degenerate top eigenvalue: gap 0 is legal.
  s.eigenvalues << 1.0, 1.0, 0.5;
  CHECK(spectral_gap(s) == doctest::Approx(0.0));

  // Top eigenvalue far from 1 is a construction error.
  s.eigenvalues << 0.9, 0.5, 0.0;
  CHECK_THROWS_AS(spectral_gap(s), construction_error);

  HermitianSpectrum one;
  one.eigenvalues = RealVector(1);
  one.eigenvalues << 1.0;
  one.eigenvectors = Matrix::Identity(1, 1);
  CHECK(spectral_gap(one) == doctest::Approx(1.0));
}

TEST_CASE("fidelity") {
  const PureState zero = PureState::basis_state(1, 0);
  CHECK(fidelity(DensityOperator::from_pure(zero), zero) == doctest::Approx(1.0));
  const DensityOperator mixed(Matrix(0.5 * Matrix::Identity(2, 2)));
  CHECK(fidelity(mixed, zero) == doctest::Approx(0.5));
  const PureState two = PureState::basis_state(2, 0);
  CHECK_THROWS_AS(fidelity(mixed, two), validation_error);
}

TEST_CASE("state and density validation") {
  Vector bad = Vector::Ones(2);
  CHECK_THROWS_AS(PureState{bad}, validation_error);
  Vector odd = Vector::Ones(3) / std::sqrt(3.0);
  CHECK_THROWS_AS(PureState{odd}, validation_error);

  Matrix not_herm(2, 2);
  not_herm << 0.5, 0.1, 0.0, 0.5;
  CHECK_THROWS_AS(DensityOperator{not_herm}, validation_error);
  Matrix wrong_trace = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator{wrong_trace}, validation_error);
  Matrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityOperator{neg}, validation_error);
}

TEST_CASE("embed_operator places factors at the right qubits") {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  check_close(embed_operator(2, {1}, x), tensor_product(x, Matrix::Identity(2, 2)), 0.0,
              "X on qubit 1");
  check_close(embed_operator(2, {2}, x), tensor_product(Matrix::Identity(2, 2), x), 0.0,
              "X on qubit 2");
  // Two-qubit factor on qubits {1,3} of three.
  RngStream rng(7);
  const Matrix op = random_matrix(4, rng);
  const Matrix embedded = embed_operator(3, {1, 3}, op);
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      const Complex expect = (bit_of(a, 3, 2) == bit_of(b, 3, 2))
                                 ? op(sub_index(a, 3, {1, 3}), sub_index(b, 3, {1, 3}))
                                 : Complex(0, 0);
      CHECK(std::abs(embedded(a, b) - expect) == 0.0);
    }
  }
}

TEST_CASE("embed_product_vector") {
  Vector zero(2), one(2);
  zero << 1, 0;
  one << 0, 1;
  const Vector v = embed_product_vector(2, {1}, zero, {2}, one);
  CHECK(std::abs(v(1) - Complex(1, 0)) == 0.0);  // |01>
  CHECK(v.cwiseAbs().sum() == doctest::Approx(1.0));

  // Interleaved sets: a on {2}, b on {1,3}.
  Vector b(4);
  b << 0, 0, 0, 1;  // |11> on (1,3)
  const Vector w = embed_product_vector(3, {2}, one, {1, 3}, b);
  CHECK(std::abs(w(0b111) - Complex(1, 0)) == 0.0);
}
