#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsv/linalg.hpp"
#include "qsv/pauli.hpp"

namespace qsv {

// ============================================================================
// Signed n-qubit Pauli operator in symplectic form.
// ----------------------------------------------------------------------------
// The operator is  i^phase_power * prod_q sigma_q  where sigma_q is the
// canonical letter encoded by the bit pair (x_q, z_q):
//   (0,0)=I  (1,0)=X  (1,1)=Y  (0,1)=Z.
// Stabilizer-group elements always carry phase_power in {0,2} (sign +/-1);
// odd powers can appear transiently in products and are permitted here.
// ============================================================================
struct PauliString {
  int n = 0;
  std::vector<std::uint8_t> x, z;   // per-qubit symplectic bits
  std::uint8_t phase_power = 0;     // power of i, mod 4

  PauliString() = default;
  explicit PauliString(int n);

  // Parse "XXI", "+XZZ", "-YYX"; an optional leading sign only.
  static PauliString from_string(const std::string& s);
  std::string to_string() const;

  char letter(int qubit) const;          // 'I','X','Y','Z'
  int weight() const;                    // number of non-identity letters
  bool is_identity_letters() const;      // all letters I (sign ignored)
  bool is_hermitian() const { return (phase_power & 1) == 0; }
  double sign() const;                   // +1 / -1 for Hermitian strings

  PauliString operator*(const PauliString& other) const;
  bool commutes_with(const PauliString& other) const;
  bool same_letters(const PauliString& other) const;

  // Dense 2^n x 2^n matrix (subject to the dimension cap).
  Matrix dense() const;
  // y = P x without materializing the matrix; O(2^n).
  Vector apply(const Vector& v) const;

  // In-place Clifford conjugation P <- U P U^dagger.
  void conjugate_h(int qubit);
  void conjugate_s(int qubit);
  void conjugate_cnot(int control, int target);

  bool operator==(const PauliString& other) const;
};

// Unsigned Pauli axis pattern mu = (mu_x; mu_z) in Z_2^{2n}; identifies a
// composite Pauli measurement (which qubits, which axes) with no phase.
struct SymplecticVector {
  int n = 0;
  std::vector<std::uint8_t> x, z;

  SymplecticVector() = default;
  explicit SymplecticVector(int n);
  static SymplecticVector from_string(const std::string& letters);  // "ZZI"
  static SymplecticVector from_layout(const PauliLayout& layout);

  int weight() const;
  std::vector<int> support() const;          // measured qubits, ascending
  bool has_axis(int qubit) const { return x[qubit - 1] || z[qubit - 1]; }
  Axis axis_at(int qubit) const;             // requires has_axis
  PauliLayout to_layout() const;
  std::string to_string() const;

  // The Hermitian Pauli operator W_mu (phase_power 0 in the convention above).
  PauliString to_pauli() const;

  bool operator==(const SymplecticVector& other) const;
};

}  // namespace qsv
