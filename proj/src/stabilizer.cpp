#include "qsv/stabilizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qsv/comb.hpp"
#include "qsv/pauli.hpp"

namespace qsv {

namespace {

constexpr double kBranchTol = 1e-12;

// Bit layout of a symplectic row: x bits occupy [0, n), z bits [n, 2n).
int pivot_of(std::uint64_t x, std::uint64_t z, int n) {
  if (x) return std::countr_zero(x);
  if (z) return n + std::countr_zero(z);
  return -1;
}

std::uint64_t pack_bits(const std::vector<std::uint8_t>& bits) {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out |= 1ULL << i;
  return out;
}

// Basis of {v : rows . v = 0} over F_2, columns [0, ncols).
std::vector<std::uint64_t> f2_kernel_basis(const std::vector<std::uint64_t>& rows, int ncols) {
  std::vector<std::uint64_t> echelon;
  std::vector<int> pivots;
  for (std::uint64_t row : rows) {
    for (std::size_t i = 0; i < echelon.size(); ++i)
      if ((row >> pivots[i]) & 1) row ^= echelon[i];
    if (!row) continue;
    const int p = std::countr_zero(row);
    for (auto& e : echelon)
      if ((e >> p) & 1) e ^= row;
    echelon.push_back(row);
    pivots.push_back(p);
  }
  std::uint64_t pivot_mask = 0;
  for (int p : pivots) pivot_mask |= 1ULL << p;
  std::vector<std::uint64_t> basis;
  for (int c = 0; c < ncols; ++c) {
    if ((pivot_mask >> c) & 1) continue;
    std::uint64_t v = 1ULL << c;
    for (std::size_t i = 0; i < echelon.size(); ++i)
      if ((echelon[i] >> c) & 1) v |= 1ULL << pivots[i];
    basis.push_back(v);
  }
  return basis;
}

// Rows of the F_2 compatibility system for g^v in R_mu: one row per measured
// qubit j, with column a set when generator a's letter at j fails to lie in
// the span of mu's letter there (symplectic product of the two letters).
std::vector<std::uint64_t> compatibility_rows(const StabilizerGroup& s,
                                              const SymplecticVector& mu) {
  const int n = s.qubits();
  std::vector<std::uint64_t> xcol(n, 0), zcol(n, 0);
  for (int a = 0; a < s.generator_count(); ++a) {
    const PauliString& g = s.generators()[a];
    for (int j = 0; j < n; ++j) {
      if (g.x[j]) xcol[j] |= 1ULL << a;
      if (g.z[j]) zcol[j] |= 1ULL << a;
    }
  }
  std::vector<std::uint64_t> rows;
  for (int j = 0; j < n; ++j) {
    const bool ax = mu.x[j], az = mu.z[j];
    if (!ax && !az) continue;
    std::uint64_t row = 0;
    if (az) row ^= xcol[j];  // z part of mu pairs with generator x bits
    if (ax) row ^= zcol[j];
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::uint64_t> compatibility_kernel(const StabilizerGroup& s,
                                                const SymplecticVector& mu) {
  if (s.generator_count() != s.qubits())
    throw validation_error("stabilizer: a full n-generator group is required");
  if (mu.n != s.qubits())
    throw validation_error("stabilizer: measurement qubit count mismatch");
  return f2_kernel_basis(compatibility_rows(s, mu), s.qubits());
}

Matrix dense_identity(int n) { return PauliString(n).dense(); }

// Product of axis eigenstates for outcome bits v over the measured qubits of
// mu (ascending), as a 2^t vector.
Vector joint_eigenstate(const SymplecticVector& mu, const std::vector<int>& v) {
  const std::vector<int> measured = mu.support();
  Vector acc = Vector::Ones(1);
  for (std::size_t a = 0; a < measured.size(); ++a)
    acc = tensor_product(acc, axis_eigenstate(mu.axis_at(measured[a]), v[a]));
  return acc;
}

// Letters of the T_mu element selected by mask, as a t-qubit Pauli string in
// measured-qubit order.
PauliString sub_letters(const SymplecticVector& mu, std::uint64_t mask) {
  const std::vector<int> measured = mu.support();
  PauliString p(static_cast<int>(measured.size()));
  for (std::size_t a = 0; a < measured.size(); ++a) {
    if (!((mask >> a) & 1)) continue;
    p.x[a] = mu.x[measured[a] - 1];
    p.z[a] = mu.z[measured[a] - 1];
  }
  return p;
}

void check_weight_range(int t, int n, const char* where) {
  if (t < 1 || t > n - 1)
    throw validation_error(std::string(where) + ": weight must lie in [1, n-1]");
}

long long multinomial3(int t, int mx, int my) {
  return binomial(t, mx) * binomial(t - mx, my);
}

}  // namespace

// ============================================================================
// StabilizerGroup
// ============================================================================

StabilizerGroup::StabilizerGroup(int n) : n_(n) {
  if (n < 1) throw validation_error("stabilizer group: qubit count must be positive");
  if (n > 63) throw capacity_error("stabilizer group: more than 63 qubits unsupported");
}

StabilizerGroup::StabilizerGroup(std::vector<PauliString> generators)
    : generators_(std::move(generators)) {
  if (generators_.empty())
    throw validation_error("stabilizer group: at least one generator required");
  n_ = generators_[0].n;
  if (n_ < 1) throw validation_error("stabilizer group: empty generator");
  if (n_ > 63) throw capacity_error("stabilizer group: more than 63 qubits unsupported");
  if (static_cast<int>(generators_.size()) > n_)
    throw validation_error("stabilizer group: more generators than qubits");
  for (const auto& g : generators_) {
    if (g.n != n_) throw validation_error("stabilizer group: generator size mismatch");
    if (!g.is_hermitian() )
      throw validation_error("stabilizer group: generators must be Hermitian (+/-1 sign)");
    if (g.is_identity_letters())
      throw validation_error("stabilizer group: identity is not an admissible generator");
  }
  for (std::size_t i = 0; i < generators_.size(); ++i)
    for (std::size_t j = i + 1; j < generators_.size(); ++j)
      if (!generators_[i].commutes_with(generators_[j]))
        throw validation_error("stabilizer group: generators must commute");

  // Letter-independence via reduced echelon over the 2n symplectic columns.
  for (std::size_t a = 0; a < generators_.size(); ++a) {
    EchelonRow row{pack_bits(generators_[a].x), pack_bits(generators_[a].z), 1ULL << a};
    for (const auto& e : echelon_) {
      const int p = pivot_of(e.x, e.z, n_);
      const bool hit = p < n_ ? (row.x >> p) & 1 : (row.z >> (p - n_)) & 1;
      if (hit) {
        row.x ^= e.x;
        row.z ^= e.z;
        row.combo ^= e.combo;
      }
    }
    if (!row.x && !row.z)
      throw validation_error("stabilizer group: generators are dependent");
    const int p = pivot_of(row.x, row.z, n_);
    for (auto& e : echelon_) {
      const bool hit = p < n_ ? (e.x >> p) & 1 : (e.z >> (p - n_)) & 1;
      if (hit) {
        e.x ^= row.x;
        e.z ^= row.z;
        e.combo ^= row.combo;
      }
    }
    echelon_.push_back(row);
  }
}

PauliString StabilizerGroup::element(std::uint64_t mask) const {
  PauliString acc(n_);
  for (std::size_t a = 0; a < generators_.size(); ++a)
    if ((mask >> a) & 1) acc = acc * generators_[a];
  return acc;
}

std::vector<PauliString> StabilizerGroup::elements() const {
  std::vector<PauliString> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint64_t mask = 0; mask < static_cast<std::uint64_t>(size()); ++mask)
    out.push_back(element(mask));
  return out;
}

Matrix StabilizerGroup::projector() const {
  Matrix p = dense_identity(n_);
  for (const auto& g : generators_) p = 0.5 * (p + p * g.dense());
  return p;
}

std::optional<std::uint64_t> StabilizerGroup::letter_decomposition(const PauliString& p) const {
  if (p.n != n_) throw validation_error("stabilizer group: operand size mismatch");
  std::uint64_t x = pack_bits(p.x), z = pack_bits(p.z), combo = 0;
  for (const auto& e : echelon_) {
    const int piv = pivot_of(e.x, e.z, n_);
    const bool hit = piv < n_ ? (x >> piv) & 1 : (z >> (piv - n_)) & 1;
    if (hit) {
      x ^= e.x;
      z ^= e.z;
      combo ^= e.combo;
    }
  }
  if (x || z) return std::nullopt;
  return combo;
}

bool StabilizerGroup::contains(const PauliString& p) const {
  if (!p.is_hermitian()) return false;
  const auto mask = letter_decomposition(p);
  if (!mask) return false;
  return element(*mask).phase_power == p.phase_power;
}

bool StabilizerGroup::contains_negation(const PauliString& p) const {
  PauliString q = p;
  q.phase_power = static_cast<std::uint8_t>((q.phase_power + 2) & 3);
  return contains(q);
}

// ============================================================================
// Measurement groups and test operators
// ============================================================================

StabilizerGroup measurement_group(const SymplecticVector& mu) {
  if (mu.weight() < 1)
    throw validation_error("measurement group: weight must be at least 1");
  std::vector<PauliString> gens;
  for (int j : mu.support()) {
    PauliString p(mu.n);
    p.x[j - 1] = mu.x[j - 1];
    p.z[j - 1] = mu.z[j - 1];
    gens.push_back(p);
  }
  return StabilizerGroup(std::move(gens));
}

Matrix outcome_projector(const SymplecticVector& mu, const std::vector<int>& v) {
  const std::vector<int> measured = mu.support();
  if (v.size() != measured.size())
    throw validation_error("outcome projector: outcome length mismatch");
  for (int b : v)
    if (b != 0 && b != 1) throw validation_error("outcome projector: outcomes must be bits");
  Matrix p = dense_identity(mu.n);
  for (std::size_t a = 0; a < measured.size(); ++a) {
    const int j = measured[a];
    PauliString letter(mu.n);
    letter.x[j - 1] = mu.x[j - 1];
    letter.z[j - 1] = mu.z[j - 1];
    const double sign = v[a] ? -1.0 : 1.0;
    p = 0.5 * (p + sign * (p * letter.dense()));
  }
  return p;
}

Matrix general_test_operator(const DensityOperator& rho, const SymplecticVector& mu) {
  const int n = rho.n;
  if (mu.n != n) throw validation_error("test operator: qubit count mismatch");
  const int t = mu.weight();
  if (t < 1) throw validation_error("test operator: weight-0 measurement rejected");
  const std::vector<int> measured = mu.support();
  const std::vector<int> kept = complement_of(n, measured);

  const double q0 =
      (rho.matrix * outcome_projector(mu, std::vector<int>(t, 0))).trace().real();
  if (q0 <= kBranchTol)
    throw incompatible_measurement_error(
        "test operator: all-plus outcome has zero probability for this target");

  Matrix omega = Matrix::Zero(rho.dimension(), rho.dimension());
  std::vector<int> v(t, 0);
  for (std::uint64_t mask = 0; mask < (1ULL << t); ++mask) {
    for (int a = 0; a < t; ++a) v[a] = static_cast<int>((mask >> a) & 1);
    const Matrix proj = outcome_projector(mu, v);
    const double pv = (rho.matrix * proj).trace().real();
    if (pv <= kBranchTol) continue;
    const Matrix conditional = partial_trace(proj * rho.matrix * proj, n, kept) / pv;
    const Vector s = joint_eigenstate(mu, v);
    const Matrix measured_block = embed_operator(n, measured, s * s.adjoint());
    if (kept.empty())
      omega += measured_block;
    else
      omega += measured_block * embed_operator(n, kept, conditional);
  }
  return omega;
}

Matrix group_sum_test_operator(const DensityOperator& rho, const SymplecticVector& mu) {
  const int n = rho.n;
  if (mu.n != n) throw validation_error("test operator: qubit count mismatch");
  const int t = mu.weight();
  if (t < 1) throw validation_error("test operator: weight-0 measurement rejected");
  const std::vector<int> measured = mu.support();
  const std::vector<int> kept = complement_of(n, measured);

  const double q0 =
      (rho.matrix * outcome_projector(mu, std::vector<int>(t, 0))).trace().real();
  if (q0 <= kBranchTol)
    throw incompatible_measurement_error(
        "test operator: all-plus outcome has zero probability for this target");

  Matrix omega = Matrix::Zero(rho.dimension(), rho.dimension());
  for (std::uint64_t mask = 0; mask < (1ULL << t); ++mask) {
    const Matrix t_letters = sub_letters(mu, mask).dense();
    const Matrix t_full = embed_operator(n, measured, t_letters);
    const Matrix reduced = partial_trace(rho.matrix * t_full, n, kept);
    if (kept.empty())
      omega += reduced(0, 0) * embed_operator(n, measured, t_letters);
    else
      omega += embed_operator(n, measured, t_letters) * embed_operator(n, kept, reduced);
  }
  return omega / (std::ldexp(1.0, t) * q0);
}

RGroup r_group(const StabilizerGroup& s, const SymplecticVector& mu) {
  const std::vector<std::uint64_t> kernel = compatibility_kernel(s, mu);
  std::vector<PauliString> gens;
  gens.reserve(kernel.size());
  for (std::uint64_t v : kernel) gens.push_back(s.element(v));
  if (gens.empty()) return RGroup{StabilizerGroup(s.qubits()), {}};
  return RGroup{StabilizerGroup(std::move(gens)), kernel};
}

Matrix stabilizer_test_operator(const StabilizerGroup& s, const SymplecticVector& mu) {
  if (s.generator_count() != s.qubits())
    throw validation_error("stabilizer: a full n-generator group is required");
  const int t = mu.weight();
  if (t < 1) throw validation_error("test operator: weight-0 measurement rejected");
  const std::vector<int> measured = mu.support();
  for (std::uint64_t mask = 1; mask < (1ULL << t); ++mask) {
    PauliString w(mu.n);
    for (int a = 0; a < t; ++a) {
      if (!((mask >> a) & 1)) continue;
      w.x[measured[a] - 1] = mu.x[measured[a] - 1];
      w.z[measured[a] - 1] = mu.z[measured[a] - 1];
    }
    if (s.contains_negation(w))
      throw incompatible_measurement_error(
          "test operator: -T for T in the measurement group stabilizes the target");
  }
  const RGroup rg = r_group(s, mu);
  const Eigen::Index dim = dense_identity(s.qubits()).rows();  // enforces the cap
  Matrix omega = Matrix::Zero(dim, dim);
  for (const auto& r : rg.group.elements()) omega += r.dense();
  return omega / static_cast<double>(rg.group.size());
}

GammaTable stabilizer_basis_diagonal(const StabilizerGroup& s, const SymplecticVector& mu) {
  return GammaTable{s.qubits(), compatibility_kernel(s, mu)};
}

// ============================================================================
// Enumeration, uniform gaps, classes, LP
// ============================================================================

std::vector<SymplecticVector> weight_t_measurements(int n, int t) {
  if (n < 1 || t < 0 || t > n)
    throw validation_error("measurement enumeration: invalid weight");
  double count = static_cast<double>(binomial(n, t)) * std::pow(3.0, t);
  if (count > 1e6)
    throw capacity_error("measurement enumeration: more than 1e6 patterns");
  std::vector<SymplecticVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (const auto& support : combinations(n, t)) {
    std::vector<int> axes(t, 0);  // 0=X, 1=Y, 2=Z
    while (true) {
      SymplecticVector mu(n);
      for (int a = 0; a < t; ++a) {
        const int j = support[a] - 1;
        mu.x[j] = axes[a] != 2;  // X and Y carry the x bit
        mu.z[j] = axes[a] != 0;  // Y and Z carry the z bit
      }
      out.push_back(std::move(mu));
      int pos = t - 1;
      while (pos >= 0 && axes[pos] == 2) axes[pos--] = 0;
      if (pos < 0) break;
      ++axes[pos];
    }
    if (t == 0) break;  // single empty pattern
  }
  return out;
}

bool is_standard_ghz_group(const StabilizerGroup& s) {
  const int n = s.qubits();
  if (n < 2 || s.generator_count() != n) return false;
  const auto& gens = s.generators();
  if (gens[0].phase_power != 0) return false;
  for (int j = 0; j < n; ++j)
    if (!gens[0].x[j] || gens[0].z[j]) return false;
  for (int a = 2; a <= n; ++a) {
    const PauliString& g = gens[a - 1];
    if (g.phase_power != 0) return false;
    for (int j = 0; j < n; ++j) {
      const bool want_z = (j == 0) || (j == a - 1);
      if (g.x[j] || g.z[j] != static_cast<std::uint8_t>(want_z)) return false;
    }
  }
  return true;
}

GapReport uniform_gap(const StabilizerGroup& s, int t, GapScheme scheme) {
  const int n = s.qubits();
  if (s.generator_count() != n)
    throw validation_error("uniform gap: a full n-generator group is required");
  check_weight_range(t, n, "uniform gap");

  const bool ghz = is_standard_ghz_group(s);
  if (scheme == GapScheme::ghz_classes && !ghz)
    throw validation_error("uniform gap: class scheme requires the standard GHZ generators");

  // Candidate sign-flip patterns Z_2^n \ {0}.  The standard GHZ presentation
  // is symmetric under permuting generators 2..n, so (w_1, |w_2..n|)
  // representatives suffice; the first candidate is w = (1, 0...).
  std::vector<std::uint64_t> candidates;
  if (ghz) {
    for (int k = 0; k < n; ++k)
      for (int w1 = 1; w1 >= 0; --w1) {
        if (k == 0 && w1 == 0) continue;
        const std::uint64_t tail = k > 0 ? ((1ULL << k) - 1) << 1 : 0;
        candidates.push_back(static_cast<std::uint64_t>(w1) | tail);
      }
  } else {
    if (n > 8)
      throw capacity_error("uniform gap: exhaustive sign-pattern scan limited to 8 qubits");
    for (std::uint64_t w = 1; w < (1ULL << n); ++w) candidates.push_back(w);
  }

  // Column masks of generator letter bits per qubit.
  std::vector<std::uint64_t> xcol(n, 0), zcol(n, 0);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j) {
      if (s.generators()[a].x[j]) xcol[j] |= 1ULL << a;
      if (s.generators()[a].z[j]) zcol[j] |= 1ULL << a;
    }

  const double naive_weight = 1.0 / (static_cast<double>(binomial(n, t)) * std::pow(3.0, t));
  const double class_scale =
      2.0 / (static_cast<double>(t + 1) * (t + 2) * static_cast<double>(binomial(n, t)));

  std::vector<double> acc(candidates.size(), 0.0);
  std::vector<std::uint64_t> rows(t);
  for (const auto& support : combinations(n, t)) {
    std::vector<int> axes(t, 0);  // 0=X, 1=Y, 2=Z
    while (true) {
      for (int a = 0; a < t; ++a) {
        const int j = support[a] - 1;
        rows[a] = axes[a] == 0 ? zcol[j] : (axes[a] == 1 ? (xcol[j] ^ zcol[j]) : xcol[j]);
      }
      double weight = naive_weight;
      if (scheme == GapScheme::ghz_classes) {
        int mx = 0, my = 0;
        for (int a = 0; a < t; ++a) {
          mx += axes[a] == 0;
          my += axes[a] == 1;
        }
        weight = class_scale / static_cast<double>(multinomial3(t, mx, my));
      }
      const std::vector<std::uint64_t> kernel = f2_kernel_basis(rows, n);
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        bool orthogonal = true;
        for (std::uint64_t b : kernel)
          if (std::popcount(b & candidates[c]) & 1) {
            orthogonal = false;
            break;
          }
        if (orthogonal) acc[c] += weight;
      }
      int pos = t - 1;
      while (pos >= 0 && axes[pos] == 2) axes[pos--] = 0;
      if (pos < 0) break;
      ++axes[pos];
    }
  }

  GapReport report;
  report.second_eigenvalue = -1.0;
  for (std::size_t c = 0; c < candidates.size(); ++c)
    if (acc[c] > report.second_eigenvalue) {
      report.second_eigenvalue = acc[c];
      report.argmax_w = candidates[c];
    }
  report.nu = 1.0 - report.second_eigenvalue;
  return report;
}

std::vector<GhzClass> ghz_equivalence_classes(int n, int t) {
  check_weight_range(t, n, "equivalence classes");
  std::vector<GhzClass> out;
  for (int mx = t; mx >= 0; --mx)
    for (int my = t - mx; my >= 0; --my) {
      const int mz = t - mx - my;
      GhzClass cls;
      cls.counts = {mx, my, mz};
      cls.size = binomial(n, t) * multinomial3(t, mx, my);
      cls.probability = 2.0 / (static_cast<double>(t + 1) * (t + 2));
      SymplecticVector rep(n);
      for (int a = 0; a < t; ++a) {
        rep.x[a] = a < mx + my;  // X then Y then Z on qubits 1..t
        rep.z[a] = a >= mx;
      }
      cls.representative = std::move(rep);
      out.push_back(std::move(cls));
    }
  return out;
}

LpGapOptimum lp_optimize(const StabilizerGroup& s, int t) {
  const int n = s.qubits();
  if (s.generator_count() != n)
    throw validation_error("lp optimize: a full n-generator group is required");
  check_weight_range(t, n, "lp optimize");
  if (n > 8) throw capacity_error("lp optimize: limited to 8 qubits");

  LpGapOptimum opt;
  opt.measurements = weight_t_measurements(n, t);
  const std::size_t cols = opt.measurements.size();
  std::vector<GammaTable> tables;
  tables.reserve(cols);
  for (const auto& mu : opt.measurements) tables.push_back(stabilizer_basis_diagonal(s, mu));

  // Game form: gamma shifted by +1 keeps every payoff positive, so
  // maximizing 1.u subject to (gamma+1)^T u <= 1 recovers the minimax
  // distribution p = u / sum(u) with game value 1/sum(u) - 1.
  const std::size_t rows = (1ULL << n) - 1;
  std::vector<std::vector<double>> a(rows, std::vector<double>(cols));
  for (std::size_t w = 1; w <= rows; ++w)
    for (std::size_t m = 0; m < cols; ++m)
      a[w - 1][m] = tables[m].gamma(w) ? 2.0 : 1.0;
  const LpResult lp =
      simplex_maximize(a, std::vector<double>(rows, 1.0), std::vector<double>(cols, 1.0));

  double total = 0.0;
  for (double u : lp.x) total += u;
  if (total <= 0.0) throw construction_error("lp optimize: degenerate solution");
  opt.p.resize(cols);
  for (std::size_t m = 0; m < cols; ++m) opt.p[m] = lp.x[m] / total;
  opt.nu = 2.0 - 1.0 / total;
  opt.iterations = lp.iterations;
  return opt;
}

}  // namespace qsv
