#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qsv/errors.hpp"

namespace qsv {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// ============================================================================
// Conventions
// ----------------------------------------------------------------------------
// Qubits are numbered 1..n and qubit 1 is the most significant bit of the
// computational-basis index: |b1 b2 ... bn> lives at index sum_q b_q 2^(n-q).
// Measurement outcomes are stored as bits v in {0,1} and correspond to the
// eigenvalue (-1)^v of the measured Pauli axis.
// ============================================================================

// Mutable cap on the dense Hilbert-space dimension (default 2^12).  Requests
// beyond the cap raise capacity_error instead of attempting the allocation.
int& dimension_cap();

// Number of qubits for a dimension that must be a power of two (>= 1).
int qubit_count_for_dimension(Eigen::Index dim);

inline int bit_of(int index, int n, int qubit) { return (index >> (n - qubit)) & 1; }

// Index of the sub-register formed by `qubits` (sorted ascending, 1-based)
// inside the full n-qubit index, preserving qubit order.
int sub_index(int index, int n, const std::vector<int>& qubits);

// --- states -----------------------------------------------------------------

// Pure state on n qubits; amplitudes are validated to unit norm within 1e-12.
struct PureState {
  int n = 0;
  Vector amplitudes;

  PureState() = default;
  explicit PureState(Vector amps);

  static PureState basis_state(int n, int index);

  Eigen::Index dimension() const { return amplitudes.size(); }
};

// Density operator: Hermitian within 1e-12 (max-abs), unit trace within 1e-10,
// eigenvalues >= -1e-10.
struct DensityOperator {
  int n = 0;
  Matrix matrix;

  DensityOperator() = default;
  explicit DensityOperator(Matrix m);

  static DensityOperator from_pure(const PureState& psi);

  Eigen::Index dimension() const { return matrix.rows(); }
};

// Eigenvalues in descending order with matching orthonormal eigenvector
// columns.
struct HermitianSpectrum {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

// --- operations -------------------------------------------------------------

Matrix tensor_product(const Matrix& a, const Matrix& b);
Vector tensor_product(const Vector& a, const Vector& b);

// Trace out every qubit not in `keep` (sorted ascending, 1-based).  The input
// may be any square operator on n qubits, not necessarily normalized.  An
// empty keep list yields the 1x1 matrix holding the full trace.
Matrix partial_trace(const Matrix& m, int n, const std::vector<int>& keep);

// Dense Hermitian eigendecomposition (descending).  Inputs farther than 1e-10
// (max-abs) from Hermitian are rejected.
HermitianSpectrum hermitian_eig(const Matrix& a);

// nu = lambda_1 - lambda_2 for a spectrum whose top eigenvalue must be 1
// within 1e-8 (protocol strategy operators fix the target state).  A
// one-dimensional spectrum has gap 1 by convention.
double spectral_gap(const HermitianSpectrum& spectrum);

// <psi|rho|psi>, clamped to [0,1] with 1e-12 slack.
double fidelity(const DensityOperator& rho, const PureState& psi);

// --- embeddings -------------------------------------------------------------

// Operator acting as `op` on the listed qubits (sorted ascending; the first
// listed qubit is the most significant bit of op's own index) and as identity
// elsewhere.
Matrix embed_operator(int n, const std::vector<int>& qubits, const Matrix& op);

// Product vector with factor `a` on set_a and factor `b` on set_b; the two
// sorted sets must partition {1..n}.
Vector embed_product_vector(int n, const std::vector<int>& set_a, const Vector& a,
                            const std::vector<int>& set_b, const Vector& b);

}  // namespace qsv
