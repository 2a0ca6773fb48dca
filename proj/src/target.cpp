#include "qsv/target.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qsv {

namespace {

constexpr double kZeroBranchTol = 1e-14;  // on squared norm

// --- MPS helpers ------------------------------------------------------------

// dl x dr slice A[:, p, :] as an Eigen matrix.
Matrix slice(const Tensor3& t, int p) {
  Matrix m(t.dl, t.dr);
  for (int l = 0; l < t.dl; ++l) {
    for (int r = 0; r < t.dr; ++r) m(l, r) = t.at(l, p, r);
  }
  return m;
}

// Row vector transfer: contract site tensor against a single-qubit bra.
Matrix bra_slice(const Tensor3& t, const Eigen::Vector2cd& bra_conj) {
  Matrix m = Matrix::Zero(t.dl, t.dr);
  for (int p = 0; p < 2; ++p) m += bra_conj(p) * slice(t, p);
  return m;
}

double mps_norm_squared(const std::vector<Tensor3>& tensors) {
  Matrix env = Matrix::Identity(1, 1);
  for (const Tensor3& t : tensors) {
    Matrix next = Matrix::Zero(t.dr, t.dr);
    for (int p = 0; p < 2; ++p) {
      const Matrix ap = slice(t, p);
      next += ap.adjoint() * env * ap;
    }
    env = std::move(next);
  }
  return env.trace().real();
}

Complex mps_amplitude(const MpsTarget& mps, const std::vector<Axis>& axes,
                      const std::vector<int>& bits) {
  Matrix v = Matrix::Identity(1, 1);
  for (int q = 1; q <= mps.n; ++q) {
    const Eigen::Vector2cd bra = axis_eigenstate(axes[q - 1], bits[q - 1]).conjugate();
    v = v * bra_slice(mps.tensors[q - 1], bra);
  }
  return v(0, 0);
}

// Conditional state on the unmeasured register: measured sites collapse to
// bond matrices that are absorbed into the neighboring surviving tensors, so
// the cost stays polynomial in the bond dimension.
std::vector<Tensor3> mps_project(const MpsTarget& mps, const PauliLayout& layout,
                                 const std::vector<int>& outcomes) {
  std::vector<Tensor3> out;
  Matrix carry = Matrix::Identity(1, 1);
  std::size_t mi = 0;
  for (int q = 1; q <= mps.n; ++q) {
    const Tensor3& t = mps.tensors[q - 1];
    const bool measured =
        mi < layout.measured.size() && layout.measured[mi] == q;
    if (measured) {
      const Eigen::Vector2cd bra =
          axis_eigenstate(layout.axes[mi], outcomes[mi]).conjugate();
      carry = carry * bra_slice(t, bra);
      ++mi;
    } else {
      Tensor3 b(static_cast<int>(carry.rows()), 2, t.dr);
      for (int p = 0; p < 2; ++p) {
        const Matrix m = carry * slice(t, p);
        for (int l = 0; l < b.dl; ++l) {
          for (int r = 0; r < b.dr; ++r) b.at(l, p, r) = m(l, r);
        }
      }
      out.push_back(std::move(b));
      carry = Matrix::Identity(t.dr, t.dr);
    }
  }
  // Trailing measured sites leave a (dr x 1) matrix to fold into the last
  // surviving tensor.
  Tensor3& last = out.back();
  Tensor3 folded(last.dl, 2, static_cast<int>(carry.cols()));
  for (int p = 0; p < 2; ++p) {
    const Matrix m = slice(last, p) * carry;
    for (int l = 0; l < folded.dl; ++l) {
      for (int r = 0; r < folded.dr; ++r) folded.at(l, p, r) = m(l, r);
    }
  }
  last = std::move(folded);
  return out;
}

Vector mps_densify(const std::vector<Tensor3>& tensors) {
  const int r = static_cast<int>(tensors.size());
  const Eigen::Index dim = Eigen::Index{1} << r;
  if (dim > dimension_cap()) throw capacity_error("mps densify: dimension exceeds cap");
  Vector out(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Matrix v = Matrix::Identity(1, 1);
    for (int q = 1; q <= r; ++q) {
      v = v * slice(tensors[q - 1], (static_cast<int>(idx) >> (r - q)) & 1);
    }
    out(idx) = v(0, 0);
  }
  return out;
}

// --- dense helpers ----------------------------------------------------------

// Contract per-qubit bras into a dense state, qubit by qubit (O(2^n) total).
Complex dense_amplitude(const Vector& amps, const std::vector<Axis>& axes,
                        const std::vector<int>& bits) {
  Vector cur = amps;
  for (std::size_t q = 0; q < axes.size(); ++q) {
    const Eigen::Vector2cd bra = axis_eigenstate(axes[q], bits[q]).conjugate();
    const Eigen::Index half = cur.size() / 2;
    Vector next(half);
    for (Eigen::Index i = 0; i < half; ++i) {
      next(i) = bra(0) * cur(i) + bra(1) * cur(half + i);
    }
    cur = std::move(next);
  }
  return cur(0);
}

Vector dense_project(const Vector& amps, int n, const PauliLayout& layout,
                     const std::vector<int>& outcomes) {
  const std::vector<int> k = layout.unmeasured();
  const int r = static_cast<int>(k.size());
  Vector out = Vector::Zero(Eigen::Index{1} << r);
  const Eigen::Index dim = amps.size();
  std::vector<Eigen::Vector2cd> bras;
  bras.reserve(layout.measured.size());
  for (std::size_t i = 0; i < layout.measured.size(); ++i) {
    bras.push_back(axis_eigenstate(layout.axes[i], outcomes[i]).conjugate());
  }
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Complex coeff = 1.0;
    for (std::size_t i = 0; i < layout.measured.size(); ++i) {
      coeff *= bras[i](bit_of(static_cast<int>(idx), n, layout.measured[i]));
    }
    out(sub_index(static_cast<int>(idx), n, k)) += coeff * amps(idx);
  }
  return out;
}

PureState normalize_branch(Vector raw, const char* what) {
  const double norm2 = raw.squaredNorm();
  if (norm2 <= kZeroBranchTol) {
    throw zero_branch_error(std::string(what) + ": outcome has probability zero");
  }
  raw /= std::sqrt(norm2);
  return PureState(std::move(raw));
}

}  // namespace

// --- Tensor3 / MpsTarget ----------------------------------------------------

Tensor3::Tensor3(int dl_, int dp_, int dr_)
    : dl(dl_), dp(dp_), dr(dr_), data(static_cast<std::size_t>(dl_) * dp_ * dr_, Complex(0, 0)) {
  if (dl < 1 || dp < 1 || dr < 1) throw validation_error("Tensor3: dimensions must be positive");
}

MpsTarget::MpsTarget(std::vector<Tensor3> tensors_) : tensors(std::move(tensors_)) {
  n = static_cast<int>(tensors.size());
  if (n < 1) throw validation_error("MpsTarget: need at least one site");
  if (tensors.front().dl != 1 || tensors.back().dr != 1) {
    throw validation_error("MpsTarget: boundary bond dimensions must be 1");
  }
  for (int i = 0; i < n; ++i) {
    if (tensors[i].dp != 2) throw validation_error("MpsTarget: physical dimension must be 2");
    if (i + 1 < n && tensors[i].dr != tensors[i + 1].dl) {
      throw validation_error("MpsTarget: bond dimension mismatch between sites " +
                             std::to_string(i + 1) + " and " + std::to_string(i + 2));
    }
  }
  const double norm = std::sqrt(mps_norm_squared(tensors));
  if (std::abs(norm - 1.0) > 1e-6) {
    throw validation_error("MpsTarget: norm " + std::to_string(norm) + " too far from 1");
  }
  if (norm > 0.0 && std::abs(norm - 1.0) > 1e-15) {
    for (Complex& c : tensors.front().data) c /= norm;
  }
}

int MpsTarget::max_bond() const {
  int d = 1;
  for (const Tensor3& t : tensors) d = std::max({d, t.dl, t.dr});
  return d;
}

// --- StabilizerTarget -------------------------------------------------------

StabilizerTarget::StabilizerTarget(std::vector<PauliString> generators_)
    : generators(std::move(generators_)) {
  if (generators.empty()) throw validation_error("StabilizerTarget: no generators");
  n = generators.front().n;
  if (static_cast<int>(generators.size()) != n) {
    throw validation_error("StabilizerTarget: a state needs exactly n generators");
  }
  std::vector<std::uint64_t> rows;
  for (const PauliString& g : generators) {
    if (g.n != n) throw validation_error("StabilizerTarget: generator size mismatch");
    if (!g.is_hermitian()) throw validation_error("StabilizerTarget: generator sign must be +/-1");
    if (g.is_identity_letters()) throw validation_error("StabilizerTarget: identity generator");
    std::uint64_t row = 0;
    for (int q = 0; q < n; ++q) {
      row |= static_cast<std::uint64_t>(g.x[q]) << q;
      row |= static_cast<std::uint64_t>(g.z[q]) << (n + q);
    }
    rows.push_back(row);
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      if (!generators[i].commutes_with(generators[j])) {
        throw validation_error("StabilizerTarget: generators " + std::to_string(i + 1) + " and " +
                               std::to_string(j + 1) + " anticommute");
      }
    }
  }
  // Independence over the symplectic bits.
  int rank = 0;
  for (std::uint64_t row : rows) {
    std::uint64_t r = row;
    for (int b = 0; b < rank; ++b) {
      r = std::min(r, r ^ rows[b]);
    }
    if (r == 0) throw validation_error("StabilizerTarget: generators are not independent");
    rows[rank++] = r;
  }

  // Materialize |psi>: apply the group projector (prod (I+g)/2) to the first
  // basis vector with nonvanishing overlap, then fix the global phase.
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (dim > dimension_cap()) throw capacity_error("StabilizerTarget: dimension exceeds cap");
  Vector best;
  for (Eigen::Index b = 0; b < dim; ++b) {
    Vector w = Vector::Zero(dim);
    w(b) = 1.0;
    for (const PauliString& g : generators) w = 0.5 * (w + g.apply(w));
    if (w.squaredNorm() > 0.5 / static_cast<double>(dim)) {
      best = std::move(w);
      break;
    }
  }
  if (best.size() == 0) {
    throw construction_error("StabilizerTarget: projector annihilated every basis vector");
  }
  best /= best.norm();
  Eigen::Index pivot = 0;
  double mx = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (std::abs(best(i)) > mx + 1e-12) {
      mx = std::abs(best(i));
      pivot = i;
    }
  }
  best *= std::conj(best(pivot)) / std::abs(best(pivot));
  state = PureState(std::move(best));
}

// --- Target free functions --------------------------------------------------

int target_qubits(const Target& target) {
  return std::visit(
      [](const auto& t) -> int {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, DenseTarget>) {
          return t.state.n;
        } else {
          return t.n;
        }
      },
      target);
}

PureState target_to_dense(const Target& target) {
  if (const auto* d = std::get_if<DenseTarget>(&target)) return d->state;
  if (const auto* s = std::get_if<StabilizerTarget>(&target)) return s->state;
  const auto& mps = std::get<MpsTarget>(target);
  Vector amps = mps_densify(mps.tensors);
  return normalize_branch(std::move(amps), "target_to_dense");
}

Complex amplitude(const Target& target, const std::vector<int>& z_bits) {
  const int n = target_qubits(target);
  if (static_cast<int>(z_bits.size()) != n) {
    throw validation_error("amplitude: bit string length mismatch");
  }
  if (const auto* d = std::get_if<DenseTarget>(&target)) {
    int idx = 0;
    for (int b : z_bits) idx = (idx << 1) | b;
    return d->state.amplitudes(idx);
  }
  if (const auto* s = std::get_if<StabilizerTarget>(&target)) {
    int idx = 0;
    for (int b : z_bits) idx = (idx << 1) | b;
    return s->state.amplitudes(idx);
  }
  return mps_amplitude(std::get<MpsTarget>(target), std::vector<Axis>(n, Axis::Z), z_bits);
}

Complex amplitude(const Target& target, const std::vector<Axis>& axes,
                  const std::vector<int>& bits) {
  const int n = target_qubits(target);
  if (static_cast<int>(axes.size()) != n || static_cast<int>(bits.size()) != n) {
    throw validation_error("amplitude: axis/bit string length mismatch");
  }
  if (const auto* m = std::get_if<MpsTarget>(&target)) return mps_amplitude(*m, axes, bits);
  const PureState psi = target_to_dense(target);
  return dense_amplitude(psi.amplitudes, axes, bits);
}

PureState post_measurement_target(const Target& target, const PauliLayout& layout,
                                  const std::vector<int>& outcomes) {
  const int n = target_qubits(target);
  if (layout.n != n) throw validation_error("post_measurement_target: qubit count mismatch");
  if (outcomes.size() != layout.measured.size()) {
    throw validation_error("post_measurement_target: outcome count mismatch");
  }
  for (int v : outcomes) {
    if (v != 0 && v != 1) throw validation_error("post_measurement_target: outcomes are bits");
  }
  if (const auto* m = std::get_if<MpsTarget>(&target)) {
    return normalize_branch(mps_densify(mps_project(*m, layout, outcomes)),
                            "post_measurement_target");
  }
  const PureState psi = target_to_dense(target);
  return normalize_branch(dense_project(psi.amplitudes, n, layout, outcomes),
                          "post_measurement_target");
}

double outcome_probability(const Target& target, const PauliLayout& layout,
                           const std::vector<int>& outcomes) {
  const int n = target_qubits(target);
  if (layout.n != n) throw validation_error("outcome_probability: qubit count mismatch");
  if (const auto* m = std::get_if<MpsTarget>(&target)) {
    return mps_norm_squared(mps_project(*m, layout, outcomes));
  }
  const PureState psi = target_to_dense(target);
  return dense_project(psi.amplitudes, n, layout, outcomes).squaredNorm();
}

// --- families ---------------------------------------------------------------

GhzTarget ghz(int n) {
  if (n < 2) throw validation_error("ghz: need n >= 2");
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (dim > dimension_cap()) throw capacity_error("ghz: dimension exceeds cap");
  Vector amps = Vector::Zero(dim);
  amps(0) = amps(dim - 1) = 1.0 / std::sqrt(2.0);

  std::vector<PauliString> gens;
  PauliString all_x(n);
  for (int q = 0; q < n; ++q) all_x.x[q] = 1;
  gens.push_back(all_x);
  for (int a = 2; a <= n; ++a) {
    PauliString g(n);
    g.z[0] = 1;
    g.z[a - 1] = 1;
    gens.push_back(g);
  }
  return GhzTarget{DenseTarget{PureState(std::move(amps))}, StabilizerTarget(std::move(gens))};
}

MpsTarget ghz_mps(int n) {
  if (n < 2) throw validation_error("ghz_mps: need n >= 2");
  std::vector<Tensor3> ts;
  Tensor3 first(1, 2, 2);
  first.at(0, 0, 0) = 1.0 / std::sqrt(2.0);
  first.at(0, 1, 1) = 1.0 / std::sqrt(2.0);
  ts.push_back(first);
  for (int q = 2; q < n; ++q) {
    Tensor3 mid(2, 2, 2);
    mid.at(0, 0, 0) = 1.0;
    mid.at(1, 1, 1) = 1.0;
    ts.push_back(mid);
  }
  Tensor3 last(2, 2, 1);
  last.at(0, 0, 0) = 1.0;
  last.at(1, 1, 0) = 1.0;
  ts.push_back(last);
  return MpsTarget(std::move(ts));
}

DenseTarget haar_random(int n, std::uint64_t seed) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (dim > dimension_cap()) throw capacity_error("haar_random: dimension exceeds cap");
  RngStream rng(seed, {0x68616172ULL});  // "haar" sub-space
  Vector amps(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    amps(i) = Complex(re, im);
  }
  amps /= amps.norm();
  return DenseTarget{PureState(std::move(amps))};
}

MpsTarget mps_from_dense(const PureState& psi, double sv_cutoff) {
  const int n = psi.n;
  std::vector<Tensor3> ts;
  Matrix rest(1, psi.dimension());
  rest.row(0) = psi.amplitudes.transpose();
  for (int q = 1; q < n; ++q) {
    const Eigen::Index dl = rest.rows();
    const Eigen::Index cols = rest.cols() / 2;
    Matrix m(dl * 2, cols);
    for (Eigen::Index l = 0; l < dl; ++l) {
      for (int p = 0; p < 2; ++p) {
        m.row(l * 2 + p) = rest.block(l, p * cols, 1, cols);
      }
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Eigen::Index chi = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > sv_cutoff * sv(0)) ++chi;
    }
    chi = std::max<Eigen::Index>(chi, 1);
    Tensor3 t(static_cast<int>(dl), 2, static_cast<int>(chi));
    for (Eigen::Index l = 0; l < dl; ++l) {
      for (int p = 0; p < 2; ++p) {
        for (Eigen::Index c = 0; c < chi; ++c) t.at(static_cast<int>(l), p, static_cast<int>(c)) = svd.matrixU()(l * 2 + p, c);
      }
    }
    ts.push_back(std::move(t));
    rest = sv.head(chi).asDiagonal() * svd.matrixV().leftCols(chi).adjoint();
  }
  Tensor3 last(static_cast<int>(rest.rows()), 2, 1);
  for (Eigen::Index l = 0; l < rest.rows(); ++l) {
    last.at(static_cast<int>(l), 0, 0) = rest(l, 0);
    last.at(static_cast<int>(l), 1, 0) = rest(l, 1);
  }
  ts.push_back(std::move(last));
  return MpsTarget(std::move(ts));
}

StabilizerTarget random_stabilizer(int n, std::uint64_t seed) {
  if (n < 1) throw validation_error("random_stabilizer: need n >= 1");
  RngStream rng(seed, {0x73746162ULL});  // "stab" sub-space
  std::vector<PauliString> gens;
  for (int q = 1; q <= n; ++q) {
    PauliString g(n);
    g.z[q - 1] = 1;
    gens.push_back(g);
  }
  const int gates = 30 * n + 10;
  for (int i = 0; i < gates; ++i) {
    const int kind = rng.uniform_int(n >= 2 ? 3 : 2);
    if (kind == 0) {
      const int q = 1 + rng.uniform_int(n);
      for (PauliString& g : gens) g.conjugate_h(q);
    } else if (kind == 1) {
      const int q = 1 + rng.uniform_int(n);
      for (PauliString& g : gens) g.conjugate_s(q);
    } else {
      const int c = 1 + rng.uniform_int(n);
      int t = 1 + rng.uniform_int(n - 1);
      if (t >= c) ++t;
      for (PauliString& g : gens) g.conjugate_cnot(c, t);
    }
  }
  return StabilizerTarget(std::move(gens));
}

}  // namespace qsv
