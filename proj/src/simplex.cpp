#include "qsv/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qsv {

namespace {
constexpr double kPivotTol = 1e-9;
}

LpResult simplex_maximize(const std::vector<std::vector<double>>& a,
                          const std::vector<double>& b,
                          const std::vector<double>& c,
                          int max_iterations) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());
  if (m == 0 || n == 0) throw validation_error("simplex: empty program");
  if (static_cast<int>(b.size()) != m) throw validation_error("simplex: b has wrong length");
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(a[i].size()) != n)
      throw validation_error("simplex: constraint row has wrong length");
    if (!(b[i] >= 0.0)) throw validation_error("simplex: negative right-hand side");
  }
  if (max_iterations < 1) throw validation_error("simplex: iteration cap must be positive");

  // Tableau rows 0..m-1: [A | I | b]; row m holds reduced costs, starting as
  // [-c | 0 | 0] for the all-slack basis.  After pivoting, the bottom-right
  // cell is the current objective value.
  const int total = n + m;
  const int rhs = total;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(total + 1, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][rhs] = b[i];
  }
  for (int j = 0; j < n; ++j) t[m][j] = -c[j];

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  const int bland_after = std::max(256, max_iterations / 2);
  int iterations = 0;
  while (true) {
    int enter = -1;
    if (iterations < bland_after) {
      double best = -kPivotTol;
      for (int j = 0; j < total; ++j)
        if (t[m][j] < best) { best = t[m][j]; enter = j; }
    } else {
      // Bland: lowest-index improving column; guarantees termination.
      for (int j = 0; j < total; ++j)
        if (t[m][j] < -kPivotTol) { enter = j; break; }
    }
    if (enter < 0) break;

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (t[i][enter] <= kPivotTol) continue;
      const double ratio = t[i][rhs] / t[i][enter];
      if (ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave < 0) throw construction_error("simplex: unbounded program");

    const double pivot = t[leave][enter];
    for (int j = 0; j <= total; ++j) t[leave][j] /= pivot;
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double factor = t[i][enter];
      if (factor == 0.0) continue;
      for (int j = 0; j <= total; ++j) t[i][j] -= factor * t[leave][j];
      t[i][enter] = 0.0;
    }
    basis[leave] = enter;

    if (++iterations > max_iterations)
      throw construction_error("simplex: iteration cap exceeded after " +
                               std::to_string(iterations) + " pivots");
  }

  LpResult result;
  result.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) result.x[basis[i]] = std::max(0.0, t[i][rhs]);
  result.objective = t[m][rhs];
  result.iterations = iterations;
  return result;
}

}  // namespace qsv
