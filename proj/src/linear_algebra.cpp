#include "monocone/linear_algebra.hpp"

#include <utility>

#include "monocone/error.hpp"

namespace monocone {

RowEchelon row_reduce(QRows rows, std::size_t cols) {
  RowEchelon out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    const Rational inv = 1 / rows[r][c];
    for (auto& q : rows[r]) q *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Rational factor = rows[i][c];
      for (std::size_t j = c; j < rows[i].size(); ++j) {
        if (rows[r][j] != 0) rows[i][j] -= factor * rows[r][j];
      }
    }
    out.pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  out.rows = std::move(rows);
  return out;
}

std::size_t rank(const QRows& rows, std::size_t cols) { return row_reduce(rows, cols).pivots.size(); }

QRows null_space(const QRows& rows, std::size_t cols) {
  const RowEchelon ech = row_reduce(rows, cols);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t p : ech.pivots) is_pivot[p] = true;
  QRows basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    QVec v = zeros(cols);
    v[free] = 1;
    for (std::size_t i = 0; i < ech.pivots.size(); ++i) v[ech.pivots[i]] = -ech.rows[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

namespace {

QRows augment(const QRows& A, const QVec& b, std::size_t cols) {
  if (A.size() != b.size()) throw Error(ErrorKind::kDimensionMismatch, "system rows and rhs differ");
  QRows aug;
  aug.reserve(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i].size() != cols) throw Error(ErrorKind::kDimensionMismatch, "system row has wrong length");
    QVec row = A[i];
    row.push_back(b[i]);
    aug.push_back(std::move(row));
  }
  return aug;
}

}  // namespace

std::optional<QVec> solve_any(const QRows& A, const QVec& b, std::size_t cols) {
  const RowEchelon ech = row_reduce(augment(A, b, cols), cols + 1);
  QVec x = zeros(cols);
  for (std::size_t i = 0; i < ech.pivots.size(); ++i) {
    if (ech.pivots[i] == cols) return std::nullopt;
    x[ech.pivots[i]] = ech.rows[i][cols];
  }
  return x;
}

std::optional<QVec> solve_unique(const QRows& A, const QVec& b, std::size_t cols) {
  const RowEchelon ech = row_reduce(augment(A, b, cols), cols + 1);
  if (ech.pivots.size() != cols) return std::nullopt;
  if (!ech.pivots.empty() && ech.pivots.back() == cols) return std::nullopt;
  QVec x = zeros(cols);
  for (std::size_t i = 0; i < ech.pivots.size(); ++i) x[ech.pivots[i]] = ech.rows[i][cols];
  return x;
}

QVec mat_vec(const QRows& A, const QVec& x) {
  QVec out;
  out.reserve(A.size());
  for (const auto& row : A) out.push_back(dot(row, x));
  return out;
}

QVec mat_t_vec(const QRows& A, const QVec& y, std::size_t cols) {
  QVec out = zeros(cols);
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (y[i] == 0) continue;
    for (std::size_t j = 0; j < cols; ++j) out[j] += A[i][j] * y[i];
  }
  return out;
}

}  // namespace monocone
