#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "monocone/rational.hpp"

namespace monocone {

/// Row-major exact matrix given as a list of rows, each of length `cols`.
using QRows = std::vector<QVec>;

struct RowEchelon {
  QRows rows;                       // reduced row echelon form, zero rows removed
  std::vector<std::size_t> pivots;  // pivot column of each row
};

RowEchelon row_reduce(QRows rows, std::size_t cols);
std::size_t rank(const QRows& rows, std::size_t cols);

/// Basis of {x : R x = 0}.
QRows null_space(const QRows& rows, std::size_t cols);

/// Some solution of A x = b, or nullopt when inconsistent.
std::optional<QVec> solve_any(const QRows& A, const QVec& b, std::size_t cols);

/// The solution of A x = b when it exists and is unique.
std::optional<QVec> solve_unique(const QRows& A, const QVec& b, std::size_t cols);

QVec mat_vec(const QRows& A, const QVec& x);
QVec mat_t_vec(const QRows& A, const QVec& y, std::size_t cols);

}  // namespace monocone
