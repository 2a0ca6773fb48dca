#pragma once

#include <string>

#include "doctest.h"
#include "qsv/linalg.hpp"

namespace qsv::testing {

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
  REQUIRE(a.size() == b.size());
  return (a - b).cwiseAbs().maxCoeff();
}

inline void check_close(const Matrix& a, const Matrix& b, double tol,
                        const std::string& what = "") {
  INFO("matrix comparison " << what);
  CHECK(max_abs_diff(a, b) <= tol);
}

inline void check_close(const Vector& a, const Vector& b, double tol,
                        const std::string& what = "") {
  INFO("vector comparison " << what);
  CHECK(max_abs_diff(a, b) <= tol);
}

// States are compared up to global phase: align on the largest component.
inline void check_state_close(const Vector& a, const Vector& b, double tol) {
  REQUIRE(a.size() == b.size());
  Eigen::Index pivot = 0;
  double mx = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i)) > mx) {
      mx = std::abs(a(i));
      pivot = i;
    }
  }
  REQUIRE(mx > 1e-12);
  REQUIRE(std::abs(b(pivot)) > 1e-12);
  const Complex phase = (b(pivot) / a(pivot)) / std::abs(b(pivot) / a(pivot));
  check_close(Vector(phase * a), b, tol);
}

}  // namespace qsv::testing
