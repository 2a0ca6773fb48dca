#include "qsv/measurement.hpp"

#include <algorithm>
#include <cmath>

namespace qsv {

namespace {

// Draw one outcome for `qubit` of the unnormalized state `rho_cur`, then
// project it in place.  Returns the outcome bit.
int sample_one_qubit(Matrix& rho_cur, int n, int qubit, Axis axis, RngStream& rng) {
  const Eigen::Vector2cd e0 = axis_eigenstate(axis, 0);
  const Matrix p0 = embed_operator(n, {qubit}, Matrix(e0 * e0.adjoint()));
  const double total = rho_cur.trace().real();
  const double w0 = std::max(0.0, (p0 * rho_cur).trace().real());
  const int bit = (rng.uniform() * total < w0) ? 0 : 1;
  if (bit == 0) {
    rho_cur = p0 * rho_cur * p0;
  } else {
    const Eigen::Vector2cd e1 = axis_eigenstate(axis, 1);
    const Matrix p1 = embed_operator(n, {qubit}, Matrix(e1 * e1.adjoint()));
    rho_cur = p1 * rho_cur * p1;
  }
  return bit;
}

}  // namespace

BornResult born_sample(const DensityOperator& rho, const PauliLayout& layout, RngStream& rng) {
  if (rho.n != layout.n) throw validation_error("born_sample: qubit count mismatch");
  Matrix cur = rho.matrix;
  BornResult result;
  result.outcomes.reserve(layout.measured.size());
  for (std::size_t i = 0; i < layout.measured.size(); ++i) {
    result.outcomes.push_back(
        sample_one_qubit(cur, layout.n, layout.measured[i], layout.axes[i], rng));
  }
  Matrix reduced = partial_trace(cur, layout.n, layout.unmeasured());
  const double p = reduced.trace().real();
  if (p <= 1e-300) throw zero_branch_error("born_sample: drew a probability-zero branch");
  result.probability = p;
  result.reduced = DensityOperator(Matrix(reduced / p));
  return result;
}

Matrix ClassicalShadow::materialize() const {
  Matrix out = Matrix::Identity(1, 1);
  for (int q = 0; q < qubits(); ++q) {
    const Eigen::Vector2cd s = axis_eigenstate(axes[q], outcomes[q]);
    const Matrix factor = 3.0 * (s * s.adjoint()) - Eigen::Matrix2cd::Identity();
    out = tensor_product(out, factor);
  }
  return out;
}

ClassicalShadow shadow_snapshot(const DensityOperator& zeta, RngStream& rng) {
  const int r = zeta.n;
  ClassicalShadow shadow;
  shadow.axes.reserve(r);
  for (int q = 0; q < r; ++q) {
    shadow.axes.push_back(static_cast<Axis>(1 + rng.uniform_int(3)));
  }
  Matrix cur = zeta.matrix;
  shadow.outcomes.reserve(r);
  for (int q = 1; q <= r; ++q) {
    shadow.outcomes.push_back(sample_one_qubit(cur, r, q, shadow.axes[q - 1], rng));
  }
  return shadow;
}

double shadow_overlap(const ClassicalShadow& shadow, const PureState& phi) {
  const int r = shadow.qubits();
  if ((Eigen::Index{1} << r) != phi.dimension()) {
    throw validation_error("shadow_overlap: dimension mismatch");
  }
  // Apply each per-qubit factor 3|s><s| - I to a working copy of phi.
  Vector v = phi.amplitudes;
  for (int q = 1; q <= r; ++q) {
    const Eigen::Vector2cd s = axis_eigenstate(shadow.axes[q - 1], shadow.outcomes[q - 1]);
    Eigen::Matrix2cd f = 3.0 * (s * s.adjoint()) - Eigen::Matrix2cd::Identity();
    const Eigen::Index stride = Eigen::Index{1} << (r - q);
    for (Eigen::Index base = 0; base < v.size(); base += 2 * stride) {
      for (Eigen::Index i = base; i < base + stride; ++i) {
        const Complex v0 = v(i), v1 = v(i + stride);
        v(i) = f(0, 0) * v0 + f(0, 1) * v1;
        v(i + stride) = f(1, 0) * v0 + f(1, 1) * v1;
      }
    }
  }
  return (phi.amplitudes.adjoint() * v)(0).real();
}

}  // namespace qsv
