#include "qsv/comb.hpp"

#include "qsv/errors.hpp"

namespace qsv {

long long binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  long long result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) cannot overflow at the sizes this toolkit handles
    // (n <= 64); guard anyway so misuse fails loudly.
    const long long numerator = n - k + i;
    if (result > (9'000'000'000'000'000'000LL / numerator)) {
      throw validation_error("binomial: value overflows");
    }
    result = result * numerator / i;
  }
  return result;
}

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> current(k);
  for (int i = 0; i < k; ++i) current[i] = i + 1;
  while (true) {
    out.push_back(current);
    int i = k - 1;
    while (i >= 0 && current[i] == n - (k - 1 - i)) --i;
    if (i < 0) break;
    ++current[i];
    for (int j = i + 1; j < k; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

std::vector<int> complement_of(int n, const std::vector<int>& subset) {
  std::vector<int> out;
  out.reserve(n - subset.size());
  std::size_t next = 0;
  for (int q = 1; q <= n; ++q) {
    if (next < subset.size() && subset[next] == q) {
      ++next;
    } else {
      out.push_back(q);
    }
  }
  if (next != subset.size()) throw validation_error("complement_of: subset not ascending in range");
  return out;
}

}  // namespace qsv
