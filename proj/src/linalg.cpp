#include "qsv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qsv {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kPsdTol = 1e-10;
constexpr double kNormTol = 1e-12;
constexpr double kEigHermitianTol = 1e-10;
constexpr double kTopEigenvalueTol = 1e-8;

bool is_power_of_two(Eigen::Index x) { return x > 0 && (x & (x - 1)) == 0; }

void check_sorted_qubits(const std::vector<int>& qubits, int n, const char* what) {
  int prev = 0;
  for (int q : qubits) {
    if (q < 1 || q > n) {
      throw validation_error(std::string(what) + ": qubit index out of range");
    }
    if (q <= prev) {
      throw validation_error(std::string(what) + ": qubit list must be strictly ascending");
    }
    prev = q;
  }
}

}  // namespace

int& dimension_cap() {
  static int cap = 1 << 12;
  return cap;
}

int qubit_count_for_dimension(Eigen::Index dim) {
  if (!is_power_of_two(dim)) {
    throw validation_error("dimension must be a power of two, got " + std::to_string(dim));
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

int sub_index(int index, int n, const std::vector<int>& qubits) {
  int out = 0;
  for (int q : qubits) out = (out << 1) | bit_of(index, n, q);
  return out;
}

PureState::PureState(Vector amps) {
  n = qubit_count_for_dimension(amps.size());
  const double norm = amps.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw validation_error("pure state amplitudes are not unit norm (|norm-1| = " +
                           std::to_string(std::abs(norm - 1.0)) + ")");
  }
  amplitudes = std::move(amps);
}

PureState PureState::basis_state(int n, int index) {
  if (n < 1) throw validation_error("basis_state: need n >= 1");
  if ((Eigen::Index{1} << n) > dimension_cap()) {
    throw capacity_error("basis_state: dimension exceeds cap");
  }
  if (index < 0 || index >= (1 << n)) throw validation_error("basis_state: index out of range");
  Vector v = Vector::Zero(Eigen::Index{1} << n);
  v(index) = 1.0;
  return PureState(std::move(v));
}

DensityOperator::DensityOperator(Matrix m) {
  if (m.rows() != m.cols()) throw validation_error("density operator must be square");
  n = qubit_count_for_dimension(m.rows());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw validation_error("density operator is not Hermitian within 1e-12");
  }
  if (std::abs(m.trace().real() - 1.0) > kTraceTol || std::abs(m.trace().imag()) > kTraceTol) {
    throw validation_error("density operator trace differs from 1 beyond 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw validation_error("density operator eigensolve failed");
  }
  if (solver.eigenvalues().minCoeff() < -kPsdTol) {
    throw validation_error("density operator has an eigenvalue below -1e-10");
  }
  matrix = std::move(m);
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return DensityOperator(psi.amplitudes * psi.amplitudes.adjoint());
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > dimension_cap() || cols > dimension_cap()) {
    throw capacity_error("tensor_product: result dimension " + std::to_string(rows) +
                         " exceeds cap " + std::to_string(dimension_cap()));
  }
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector tensor_product(const Vector& a, const Vector& b) {
  const Eigen::Index size = a.size() * b.size();
  if (size > dimension_cap()) {
    throw capacity_error("tensor_product: result dimension exceeds cap");
  }
  Vector out(size);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

Matrix partial_trace(const Matrix& m, int n, const std::vector<int>& keep) {
  if (m.rows() != m.cols()) throw validation_error("partial_trace: operator must be square");
  if (m.rows() != (Eigen::Index{1} << n)) {
    throw validation_error("partial_trace: dimension does not match qubit count");
  }
  check_sorted_qubits(keep, n, "partial_trace");

  std::vector<int> traced;
  traced.reserve(n - keep.size());
  for (int q = 1; q <= n; ++q) {
    if (!std::binary_search(keep.begin(), keep.end(), q)) traced.push_back(q);
  }

  const int kd = 1 << keep.size();
  const int td = 1 << traced.size();
  Matrix out = Matrix::Zero(kd, kd);

  // Precompute the full-index skeleton for each (keep-index, traced-index).
  std::vector<int> keep_mask(kd, 0), traced_mask(td, 0);
  for (int a = 0; a < kd; ++a) {
    int idx = 0;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      idx |= ((a >> (keep.size() - 1 - i)) & 1) << (n - keep[i]);
    }
    keep_mask[a] = idx;
  }
  for (int e = 0; e < td; ++e) {
    int idx = 0;
    for (std::size_t i = 0; i < traced.size(); ++i) {
      idx |= ((e >> (traced.size() - 1 - i)) & 1) << (n - traced[i]);
    }
    traced_mask[e] = idx;
  }

  for (int a = 0; a < kd; ++a) {
    for (int b = 0; b < kd; ++b) {
      Complex sum = 0.0;
      for (int e = 0; e < td; ++e) {
        sum += m(keep_mask[a] | traced_mask[e], keep_mask[b] | traced_mask[e]);
      }
      out(a, b) = sum;
    }
  }
  return out;
}

HermitianSpectrum hermitian_eig(const Matrix& a) {
  if (a.rows() != a.cols()) throw validation_error("hermitian_eig: matrix must be square");
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > kEigHermitianTol) {
    throw validation_error("hermitian_eig: matrix deviates from Hermitian beyond 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.adjoint()));
  if (solver.info() != Eigen::Success) {
    throw validation_error("hermitian_eig: eigensolver did not converge");
  }
  // Eigen returns ascending order; flip to descending.
  const Eigen::Index d = a.rows();
  HermitianSpectrum out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = Matrix(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    out.eigenvectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }
  return out;
}

double spectral_gap(const HermitianSpectrum& spectrum) {
  if (spectrum.eigenvalues.size() == 0) {
    throw validation_error("spectral_gap: empty spectrum");
  }
  if (std::abs(spectrum.eigenvalues(0) - 1.0) > kTopEigenvalueTol) {
    throw construction_error("spectral_gap: top eigenvalue " +
                             std::to_string(spectrum.eigenvalues(0)) +
                             " deviates from 1 beyond 1e-8");
  }
  if (spectrum.eigenvalues.size() == 1) return 1.0;
  return spectrum.eigenvalues(0) - spectrum.eigenvalues(1);
}

double fidelity(const DensityOperator& rho, const PureState& psi) {
  if (rho.dimension() != psi.dimension()) {
    throw validation_error("fidelity: dimension mismatch");
  }
  const Complex val = psi.amplitudes.adjoint() * rho.matrix * psi.amplitudes;
  double f = val.real();
  if (f < -1e-12 || f > 1.0 + 1e-12) {
    throw validation_error("fidelity: value " + std::to_string(f) + " outside [0,1] slack");
  }
  return std::clamp(f, 0.0, 1.0);
}

Matrix embed_operator(int n, const std::vector<int>& qubits, const Matrix& op) {
  check_sorted_qubits(qubits, n, "embed_operator");
  const int k = static_cast<int>(qubits.size());
  if (op.rows() != (Eigen::Index{1} << k) || op.cols() != op.rows()) {
    throw validation_error("embed_operator: operator dimension does not match qubit list");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (dim > dimension_cap()) throw capacity_error("embed_operator: dimension exceeds cap");

  std::vector<int> rest;
  for (int q = 1; q <= n; ++q) {
    if (!std::binary_search(qubits.begin(), qubits.end(), q)) rest.push_back(q);
  }
  std::vector<int> q_mask(1 << k, 0), r_mask(1 << rest.size(), 0);
  for (int a = 0; a < (1 << k); ++a) {
    int idx = 0;
    for (int i = 0; i < k; ++i) idx |= ((a >> (k - 1 - i)) & 1) << (n - qubits[i]);
    q_mask[a] = idx;
  }
  for (std::size_t e = 0; e < r_mask.size(); ++e) {
    int idx = 0;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      idx |= ((e >> (rest.size() - 1 - i)) & 1) << (n - rest[i]);
    }
    r_mask[e] = idx;
  }

  Matrix out = Matrix::Zero(dim, dim);
  for (int a = 0; a < (1 << k); ++a) {
    for (int b = 0; b < (1 << k); ++b) {
      const Complex val = op(a, b);
      if (val == Complex(0.0, 0.0)) continue;
      for (int e : r_mask) out(q_mask[a] | e, q_mask[b] | e) = val;
    }
  }
  return out;
}

Vector embed_product_vector(int n, const std::vector<int>& set_a, const Vector& a,
                            const std::vector<int>& set_b, const Vector& b) {
  check_sorted_qubits(set_a, n, "embed_product_vector");
  check_sorted_qubits(set_b, n, "embed_product_vector");
  if (set_a.size() + set_b.size() != static_cast<std::size_t>(n)) {
    throw validation_error("embed_product_vector: sets must partition the qubit range");
  }
  if (a.size() != (Eigen::Index{1} << set_a.size()) ||
      b.size() != (Eigen::Index{1} << set_b.size())) {
    throw validation_error("embed_product_vector: factor dimension mismatch");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  Vector out(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    const int ia = sub_index(static_cast<int>(idx), n, set_a);
    const int ib = sub_index(static_cast<int>(idx), n, set_b);
    out(idx) = a(ia) * b(ib);
  }
  return out;
}

}  // namespace qsv
