#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "relgame/rational.hpp"

namespace relgame {

/// Exact Gauss-Jordan solve of `lhs * x = rhs`. Returns one solution (free
/// variables pinned to zero) or nullopt when the system is inconsistent.
inline std::optional<std::vector<Rational>> solve_linear_system(
    std::vector<std::vector<Rational>> lhs, std::vector<Rational> rhs) {
  const std::size_t rows = lhs.size();
  const std::size_t cols = rows ? lhs.front().size() : 0;
  std::vector<std::size_t> pivot_col_of_row;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t pivot = row;
    while (pivot < rows && lhs[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(lhs[pivot], lhs[row]);
    std::swap(rhs[pivot], rhs[row]);
    Rational inv = 1 / lhs[row][col];
    for (std::size_t c = col; c < cols; ++c) lhs[row][c] *= inv;
    rhs[row] *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || lhs[r][col] == 0) continue;
      Rational factor = lhs[r][col];
      for (std::size_t c = col; c < cols; ++c) lhs[r][c] -= factor * lhs[row][c];
      rhs[r] -= factor * rhs[row];
    }
    pivot_col_of_row.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < rows; ++r)
    if (rhs[r] != 0) return std::nullopt;

  std::vector<Rational> solution(cols, Rational(0));
  for (std::size_t r = 0; r < pivot_col_of_row.size(); ++r)
    solution[pivot_col_of_row[r]] = rhs[r];
  return solution;
}

}  // namespace relgame
