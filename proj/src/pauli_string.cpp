#include "qsv/pauli_string.hpp"

#include <algorithm>

namespace qsv {

namespace {

// Letter codes: I=0, X=1, Y=2, Z=3 (derived from (x,z) bits).
inline int letter_code(int x, int z) {
  static constexpr int code[2][2] = {{0, 3}, {1, 2}};
  return code[x][z];
}

// sigma_a * sigma_b = i^phase_table[a][b] * sigma_(letter of xor'd bits).
constexpr std::uint8_t kPhaseTable[4][4] = {
    // I  X  Y  Z
    {0, 0, 0, 0},  // I
    {0, 0, 1, 3},  // X
    {0, 3, 0, 1},  // Y
    {0, 1, 3, 0},  // Z
};

}  // namespace

PauliString::PauliString(int n_) : n(n_), x(n_, 0), z(n_, 0) {
  if (n < 1) throw validation_error("PauliString: need n >= 1");
}

PauliString PauliString::from_string(const std::string& s) {
  std::size_t start = 0;
  std::uint8_t phase = 0;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    phase = (s[0] == '-') ? 2 : 0;
    start = 1;
  }
  if (s.size() == start) throw validation_error("PauliString: empty letter string");
  PauliString p(static_cast<int>(s.size() - start));
  p.phase_power = phase;
  for (int q = 1; q <= p.n; ++q) {
    switch (s[start + q - 1]) {
      case 'I': case 'i': break;
      case 'X': case 'x': p.x[q - 1] = 1; break;
      case 'Y': case 'y': p.x[q - 1] = 1; p.z[q - 1] = 1; break;
      case 'Z': case 'z': p.z[q - 1] = 1; break;
      default:
        throw validation_error(std::string("PauliString: invalid letter '") + s[start + q - 1] +
                               "'");
    }
  }
  return p;
}

std::string PauliString::to_string() const {
  static const char* prefix[4] = {"+", "i", "-", "-i"};
  std::string out = prefix[phase_power & 3];
  for (int q = 1; q <= n; ++q) out.push_back(letter(q));
  return out;
}

char PauliString::letter(int qubit) const {
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  return kLetters[letter_code(x[qubit - 1], z[qubit - 1])];
}

int PauliString::weight() const {
  int w = 0;
  for (int q = 0; q < n; ++q) w += (x[q] | z[q]);
  return w;
}

bool PauliString::is_identity_letters() const { return weight() == 0; }

double PauliString::sign() const {
  if (!is_hermitian()) throw validation_error("PauliString::sign: phase is not +/-1");
  return (phase_power & 2) ? -1.0 : 1.0;
}

PauliString PauliString::operator*(const PauliString& other) const {
  if (n != other.n) throw validation_error("PauliString: size mismatch in product");
  PauliString out(n);
  int phase = phase_power + other.phase_power;
  for (int q = 0; q < n; ++q) {
    const int a = letter_code(x[q], z[q]);
    const int b = letter_code(other.x[q], other.z[q]);
    phase += kPhaseTable[a][b];
    out.x[q] = x[q] ^ other.x[q];
    out.z[q] = z[q] ^ other.z[q];
  }
  out.phase_power = static_cast<std::uint8_t>(phase & 3);
  return out;
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (n != other.n) throw validation_error("PauliString: size mismatch");
  int sym = 0;
  for (int q = 0; q < n; ++q) sym ^= (x[q] & other.z[q]) ^ (z[q] & other.x[q]);
  return sym == 0;
}

bool PauliString::same_letters(const PauliString& other) const {
  return n == other.n && x == other.x && z == other.z;
}

Matrix PauliString::dense() const {
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (dim > dimension_cap()) throw capacity_error("PauliString::dense: dimension exceeds cap");
  Matrix out = Matrix::Zero(dim, dim);
  Vector col = Vector::Zero(dim);
  // Each column has exactly one nonzero: P|b> = coeff * |b ^ xmask>.
  for (Eigen::Index b = 0; b < dim; ++b) {
    col.setZero();
    col(b) = 1.0;
    Vector image = apply(col);
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (image(r) != Complex(0.0, 0.0)) out(r, b) = image(r);
    }
  }
  return out;
}

Vector PauliString::apply(const Vector& v) const {
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (v.size() != dim) throw validation_error("PauliString::apply: dimension mismatch");
  int xmask = 0;
  for (int q = 1; q <= n; ++q) {
    if (x[q - 1]) xmask |= 1 << (n - q);
  }
  Vector out = Vector::Zero(dim);
  static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (Eigen::Index b = 0; b < dim; ++b) {
    // letter action on bit v: X |v> = |1-v>, Z |v> = (-1)^v |v>,
    // Y |v> = i(-1)^v |1-v>.
    int ipow = phase_power;
    for (int q = 1; q <= n; ++q) {
      const int bit = (static_cast<int>(b) >> (n - q)) & 1;
      if (x[q - 1] && z[q - 1]) {
        ipow += 1 + 2 * bit;  // Y
      } else if (z[q - 1]) {
        ipow += 2 * bit;      // Z
      }
    }
    out(static_cast<Eigen::Index>(static_cast<int>(b) ^ xmask)) += kIPow[ipow & 3] * v(b);
  }
  return out;
}

void PauliString::conjugate_h(int qubit) {
  const int q = qubit - 1;
  std::swap(x[q], z[q]);
  if (x[q] && z[q]) phase_power = static_cast<std::uint8_t>((phase_power + 2) & 3);
}

void PauliString::conjugate_s(int qubit) {
  const int q = qubit - 1;
  if (x[q] && z[q]) phase_power = static_cast<std::uint8_t>((phase_power + 2) & 3);
  z[q] = z[q] ^ x[q];
}

void PauliString::conjugate_cnot(int control, int target) {
  const int c = control - 1, t = target - 1;
  if (c == t) throw validation_error("conjugate_cnot: control equals target");
  if (x[c] & z[t] & (x[t] ^ z[c] ^ 1)) {
    phase_power = static_cast<std::uint8_t>((phase_power + 2) & 3);
  }
  x[t] ^= x[c];
  z[c] ^= z[t];
}

bool PauliString::operator==(const PauliString& other) const {
  return n == other.n && phase_power == other.phase_power && x == other.x && z == other.z;
}

SymplecticVector::SymplecticVector(int n_) : n(n_), x(n_, 0), z(n_, 0) {
  if (n < 1) throw validation_error("SymplecticVector: need n >= 1");
}

SymplecticVector SymplecticVector::from_string(const std::string& letters) {
  const PauliString p = PauliString::from_string(letters);
  if (p.phase_power != 0) throw validation_error("SymplecticVector: no sign allowed");
  SymplecticVector mu(p.n);
  mu.x = p.x;
  mu.z = p.z;
  return mu;
}

SymplecticVector SymplecticVector::from_layout(const PauliLayout& layout) {
  SymplecticVector mu(layout.n);
  for (std::size_t i = 0; i < layout.measured.size(); ++i) {
    const int q = layout.measured[i] - 1;
    switch (layout.axes[i]) {
      case Axis::X: mu.x[q] = 1; break;
      case Axis::Y: mu.x[q] = 1; mu.z[q] = 1; break;
      case Axis::Z: mu.z[q] = 1; break;
    }
  }
  return mu;
}

int SymplecticVector::weight() const {
  int w = 0;
  for (int q = 0; q < n; ++q) w += (x[q] | z[q]);
  return w;
}

std::vector<int> SymplecticVector::support() const {
  std::vector<int> s;
  for (int q = 1; q <= n; ++q) {
    if (has_axis(q)) s.push_back(q);
  }
  return s;
}

Axis SymplecticVector::axis_at(int qubit) const {
  const int q = qubit - 1;
  if (x[q] && z[q]) return Axis::Y;
  if (x[q]) return Axis::X;
  if (z[q]) return Axis::Z;
  throw validation_error("SymplecticVector::axis_at: identity letter");
}

PauliLayout SymplecticVector::to_layout() const {
  std::vector<int> measured = support();
  if (measured.empty()) throw validation_error("SymplecticVector::to_layout: weight zero");
  std::vector<Axis> axes;
  axes.reserve(measured.size());
  for (int q : measured) axes.push_back(axis_at(q));
  return PauliLayout(n, std::move(measured), std::move(axes));
}

std::string SymplecticVector::to_string() const { return to_pauli().to_string().substr(1); }

PauliString SymplecticVector::to_pauli() const {
  PauliString p(n);
  p.x = x;
  p.z = z;
  return p;
}

bool SymplecticVector::operator==(const SymplecticVector& other) const {
  return n == other.n && x == other.x && z == other.z;
}

}  // namespace qsv
