#pragma once
// Dense Gaussian elimination over the rationals with partial pivoting on the
// first nonzero entry.  Exact; supports several right-hand sides sharing one
// elimination pass.

#include <cstddef>
#include <vector>

#include "streett/rational.hpp"

namespace streett {

// Solves a * x = b for every column b in rhs.  The matrix must be square and
// nonsingular; callers construct systems that are nonsingular by design, so a
// singular pivot indicates an internal error.
inline std::vector<std::vector<Rational>> solve_linear(
    std::vector<std::vector<Rational>> a, std::vector<std::vector<Rational>> rhs) {
  const std::size_t n = a.size();
  for (auto& row : a)
    if (row.size() != n) fail("SingularSystem", "matrix is not square");
  for (auto& b : rhs)
    if (b.size() != n) fail("SingularSystem", "rhs size mismatch");

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) fail("SingularSystem", "singular matrix");
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      for (auto& b : rhs) std::swap(b[pivot], b[col]);
    }
    const Rational inv = Rational(1) / a[col][col];
    for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
    for (auto& b : rhs) b[col] *= inv;
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Rational f = a[row][col];
      for (std::size_t j = col; j < n; ++j) a[row][j] -= f * a[col][j];
      for (auto& b : rhs) b[row] -= f * b[col];
    }
  }
  return rhs;
}

}  // namespace streett
