#include "qsv/simplex.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "qsv/rng.hpp"

using namespace qsv;

TEST_CASE("simplex solves a textbook two-variable program") {
  // max 3x + 2y  s.t.  x + y <= 4,  x + 3y <= 6 -> optimum (4, 0), value 12.
  const LpResult r = simplex_maximize({{1, 1}, {1, 3}}, {4, 6}, {3, 2});
  CHECK(r.objective == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(r.x[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r.x[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("simplex finds an interior-edge optimum") {
  // max 5x + 4y  s.t.  6x + 4y <= 24,  x + 2y <= 6 -> (3, 1.5), value 21.
  const LpResult r = simplex_maximize({{6, 4}, {1, 2}}, {24, 6}, {5, 4});
  CHECK(r.objective == doctest::Approx(21.0).epsilon(1e-12));
  CHECK(r.x[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.x[1] == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("simplex survives the classic degenerate cycling program") {
  // Beale's example: optimal value 1/20 at x = (1/25, 0, 1, 0).
  const std::vector<std::vector<double>> a = {
      {0.25, -60.0, -1.0 / 25.0, 9.0},
      {0.5, -90.0, -1.0 / 50.0, 3.0},
      {0.0, 0.0, 1.0, 0.0},
  };
  const LpResult r = simplex_maximize(a, {0, 0, 1}, {0.75, -150.0, 0.02, -6.0});
  CHECK(r.objective == doctest::Approx(0.05).epsilon(1e-10));
}

TEST_CASE("simplex matches the matrix-game transform on a 2x2 game") {
  // Columns with shifted payoffs {1,2}: value 1/sum(u) recovers the minimax
  // mixture (1/2, 1/2) of the diagonal game.
  const LpResult r = simplex_maximize({{2, 1}, {1, 2}}, {1, 1}, {1, 1});
  CHECK(r.objective == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r.x[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r.x[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("simplex optimum dominates random feasible points") {
  RngStream rng(77);
  for (int rep = 0; rep < 20; ++rep) {
    const int m = 4, n = 3;
    std::vector<std::vector<double>> a(m, std::vector<double>(n));
    std::vector<double> b(m), c(n);
    for (int i = 0; i < m; ++i) {
      b[i] = 0.5 + rng.uniform();
      for (int j = 0; j < n; ++j) a[i][j] = 0.1 + 0.9 * rng.uniform();
    }
    for (int j = 0; j < n; ++j) c[j] = rng.uniform() - 0.25;
    const LpResult r = simplex_maximize(a, b, c);

    // Feasibility of the reported optimum.
    for (int i = 0; i < m; ++i) {
      double lhs = 0;
      for (int j = 0; j < n; ++j) {
        CHECK(r.x[j] >= -1e-12);
        lhs += a[i][j] * r.x[j];
      }
      CHECK(lhs <= b[i] + 1e-9);
    }

    // No sampled feasible point does better.
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> x(n);
      for (int j = 0; j < n; ++j) x[j] = 2.0 * rng.uniform();
      double worst = 1.0;
      for (int i = 0; i < m; ++i) {
        double lhs = 0;
        for (int j = 0; j < n; ++j) lhs += a[i][j] * x[j];
        if (lhs > b[i]) worst = std::min(worst, b[i] / lhs);
      }
      double value = 0;
      for (int j = 0; j < n; ++j) value += c[j] * x[j] * worst;
      CHECK(value <= r.objective + 1e-7);
    }
  }
}

TEST_CASE("simplex rejects malformed and unbounded programs") {
  CHECK_THROWS_AS(simplex_maximize({}, {}, {1.0}), validation_error);
  CHECK_THROWS_AS(simplex_maximize({{1.0}}, {1.0}, {}), validation_error);
  CHECK_THROWS_AS(simplex_maximize({{1.0, 2.0}}, {1.0}, {1.0}), validation_error);
  CHECK_THROWS_AS(simplex_maximize({{1.0}}, {-1.0}, {1.0}), validation_error);
  CHECK_THROWS_AS(simplex_maximize({{1.0}, {2.0}}, {1.0}, {1.0}), validation_error);
  // max x with -x + y <= 1 puts no ceiling on x.
  CHECK_THROWS_AS(simplex_maximize({{-1.0, 1.0}}, {1.0}, {1.0, 0.0}), construction_error);
  // A one-pivot cap cannot finish a two-pivot program.
  CHECK_THROWS_AS(simplex_maximize({{6, 4}, {1, 2}}, {24, 6}, {5, 4}, 1), construction_error);
  CHECK_THROWS_AS(simplex_maximize({{1.0}}, {1.0}, {1.0}, 0), validation_error);
}
