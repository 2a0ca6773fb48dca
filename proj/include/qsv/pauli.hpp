#pragma once

#include <string>
#include <vector>

#include "qsv/linalg.hpp"

namespace qsv {

enum class Axis { X = 1, Y = 2, Z = 3 };

char axis_letter(Axis a);
Axis axis_from_letter(char c);

// 2x2 Pauli matrix for the axis.
Eigen::Matrix2cd pauli_matrix(Axis a);

// Eigenvector of the axis with eigenvalue (-1)^bit.  Phase convention:
//   Z: |0>, |1>        X: (|0>+|1>)/sqrt2, (|0>-|1>)/sqrt2
//   Y: (|0>+i|1>)/sqrt2 for bit 0, (|0>-i|1>)/sqrt2 for bit 1.
Eigen::Vector2cd axis_eigenstate(Axis a, int bit);

// Outcome bit <-> Pauli eigenvalue conversion.
inline double outcome_sign(int bit) { return bit ? -1.0 : 1.0; }
inline int outcome_bit(double sign) { return sign < 0.0 ? 1 : 0; }

// A composite Pauli measurement layout on n qubits: the measured set J
// (sorted ascending, with one axis per measured qubit) and its complement K,
// the surviving register.  Both sets must be nonempty.
struct PauliLayout {
  int n = 0;
  std::vector<int> measured;  // J, strictly ascending, 1-based
  std::vector<Axis> axes;     // parallel to `measured`

  PauliLayout() = default;
  PauliLayout(int n, std::vector<int> measured, std::vector<Axis> axes);

  int weight() const { return static_cast<int>(measured.size()); }   // t
  int level() const { return n - weight(); }                         // r = |K|
  std::vector<int> unmeasured() const;                               // K, ascending

  std::string axis_string() const;  // e.g. "XZY", aligned with `measured`
};

// Z-measurement layout on the complement of K (the SOP layout for subset K).
PauliLayout z_layout_for_subset(int n, const std::vector<int>& subset_k);

}  // namespace qsv
