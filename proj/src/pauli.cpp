#include "qsv/pauli.hpp"

#include <algorithm>

namespace qsv {

char axis_letter(Axis a) {
  switch (a) {
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  throw validation_error("axis_letter: invalid axis");
}

Axis axis_from_letter(char c) {
  switch (c) {
    case 'X': case 'x': return Axis::X;
    case 'Y': case 'y': return Axis::Y;
    case 'Z': case 'z': return Axis::Z;
  }
  throw validation_error(std::string("axis_from_letter: invalid letter '") + c + "'");
}

Eigen::Matrix2cd pauli_matrix(Axis a) {
  Eigen::Matrix2cd m;
  const Complex i(0.0, 1.0);
  switch (a) {
    case Axis::X: m << 0, 1, 1, 0; break;
    case Axis::Y: m << 0, -i, i, 0; break;
    case Axis::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::Vector2cd axis_eigenstate(Axis a, int bit) {
  if (bit != 0 && bit != 1) throw validation_error("axis_eigenstate: bit must be 0 or 1");
  Eigen::Vector2cd v;
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  switch (a) {
    case Axis::Z: v << (bit ? 0.0 : 1.0), (bit ? 1.0 : 0.0); break;
    case Axis::X: v << s, (bit ? -s : s); break;
    case Axis::Y: v << s, (bit ? -i * s : i * s); break;
  }
  return v;
}

PauliLayout::PauliLayout(int n_, std::vector<int> measured_, std::vector<Axis> axes_)
    : n(n_), measured(std::move(measured_)), axes(std::move(axes_)) {
  if (n < 2) throw validation_error("PauliLayout: need n >= 2");
  if (measured.empty() || measured.size() >= static_cast<std::size_t>(n)) {
    throw validation_error("PauliLayout: measured set must satisfy 1 <= |J| <= n-1");
  }
  if (axes.size() != measured.size()) {
    throw validation_error("PauliLayout: one axis required per measured qubit");
  }
  int prev = 0;
  for (int q : measured) {
    if (q < 1 || q > n) throw validation_error("PauliLayout: qubit out of range");
    if (q <= prev) throw validation_error("PauliLayout: measured set must be strictly ascending");
    prev = q;
  }
}

std::vector<int> PauliLayout::unmeasured() const {
  std::vector<int> k;
  k.reserve(n - measured.size());
  for (int q = 1; q <= n; ++q) {
    if (!std::binary_search(measured.begin(), measured.end(), q)) k.push_back(q);
  }
  return k;
}

std::string PauliLayout::axis_string() const {
  std::string s;
  s.reserve(axes.size());
  for (Axis a : axes) s.push_back(axis_letter(a));
  return s;
}

PauliLayout z_layout_for_subset(int n, const std::vector<int>& subset_k) {
  std::vector<int> j;
  for (int q = 1; q <= n; ++q) {
    if (!std::binary_search(subset_k.begin(), subset_k.end(), q)) j.push_back(q);
  }
  return PauliLayout(n, std::move(j), std::vector<Axis>(n - subset_k.size(), Axis::Z));
}

}  // namespace qsv
