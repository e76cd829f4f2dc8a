#include "monocone/lp.hpp"

#include <utility>

#include "monocone/error.hpp"

namespace monocone {

namespace {

// Dense simplex tableau over y >= 0 with rows M y = r (r >= 0).
class Tableau {
 public:
  Tableau(std::vector<QVec> rows, std::vector<std::size_t> basis, std::size_t ncols)
      : rows_(std::move(rows)), basis_(std::move(basis)), ncols_(ncols), allowed_(ncols, true) {}

  void forbid(std::size_t col) { allowed_[col] = false; }

  // Installs the reduced-cost row for costs c (size ncols).
  void set_costs(const QVec& c) {
    obj_ = QVec(ncols_ + 1, Rational(0));
    for (std::size_t j = 0; j < ncols_; ++j) obj_[j] = c[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational& cb = c[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= ncols_; ++j) {
        if (rows_[i][j] != 0) obj_[j] -= cb * rows_[i][j];
      }
    }
  }

  enum class Outcome { kOptimal, kUnbounded };

  // Bland's rule iterations. On unbounded, `entering` holds the unbounded column.
  Outcome run(std::size_t* entering_out) {
    for (;;) {
      std::size_t entering = ncols_;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (allowed_[j] && sgn(obj_[j]) < 0) {
          entering = j;
          break;
        }
      }
      if (entering == ncols_) return Outcome::kOptimal;
      std::size_t leave = rows_.size();
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (sgn(rows_[i][entering]) <= 0) continue;
        Rational ratio = rows_[i][ncols_] / rows_[i][entering];
        if (leave == rows_.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == rows_.size()) {
        *entering_out = entering;
        return Outcome::kUnbounded;
      }
      pivot(leave, entering);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rational inv = 1 / rows_[r][c];
    for (auto& q : rows_[r]) {
      if (q != 0) q *= inv;
    }
    auto eliminate = [&](QVec& row) {
      if (row[c] == 0) return;
      const Rational factor = row[c];
      for (std::size_t j = 0; j <= ncols_; ++j) {
        if (rows_[r][j] != 0) row[j] -= factor * rows_[r][j];
      }
    };
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i != r) eliminate(rows_[i]);
    }
    if (!obj_.empty()) eliminate(obj_);
    basis_[r] = c;
  }

  // Removes artificial columns [first_art, ncols) from the basis; drops redundant rows.
  void expel_artificials(std::size_t first_art) {
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < first_art) {
        ++i;
        continue;
      }
      std::size_t col = first_art;
      for (std::size_t j = 0; j < first_art; ++j) {
        if (rows_[i][j] != 0) {
          col = j;
          break;
        }
      }
      if (col == first_art) {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      pivot(i, col);
      ++i;
    }
    for (std::size_t j = first_art; j < ncols_; ++j) allowed_[j] = false;
  }

  Rational objective_value() const { return -obj_[ncols_]; }

  QVec solution() const {
    QVec y = zeros(ncols_);
    for (std::size_t i = 0; i < rows_.size(); ++i) y[basis_[i]] = rows_[i][ncols_];
    return y;
  }

  QVec ray(std::size_t entering) const {
    QVec dy = zeros(ncols_);
    dy[entering] = 1;
    for (std::size_t i = 0; i < rows_.size(); ++i) dy[basis_[i]] = -rows_[i][entering];
    return dy;
  }

 private:
  std::vector<QVec> rows_;
  std::vector<std::size_t> basis_;
  std::size_t ncols_;
  std::vector<bool> allowed_;
  QVec obj_;
};

void check_shape(const HPolyhedron& P) {
  if (P.A.size() != P.b.size() || P.E.size() != P.f.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "polyhedron rows and right-hand sides differ");
  }
  for (const auto& row : P.A) {
    if (row.size() != P.dim) throw Error(ErrorKind::kDimensionMismatch, "inequality row length");
  }
  for (const auto& row : P.E) {
    if (row.size() != P.dim) throw Error(ErrorKind::kDimensionMismatch, "equality row length");
  }
}

}  // namespace

LpSolution minimize(const HPolyhedron& P, const QVec& c) {
  check_shape(P);
  const std::size_t d = P.dim;
  if (c.size() != d) throw Error(ErrorKind::kDimensionMismatch, "objective length");
  const std::size_t m_in = P.A.size();
  const std::size_t m_eq = P.E.size();
  const std::size_t m = m_in + m_eq;
  const std::size_t n_struct = 2 * d + m_in;

  // Count artificials: inequality rows with negative rhs, plus every equality row.
  std::size_t n_art = m_eq;
  for (const auto& bi : P.b) {
    if (sgn(bi) < 0) ++n_art;
  }
  const std::size_t ncols = n_struct + n_art;

  std::vector<QVec> rows;
  std::vector<std::size_t> basis;
  rows.reserve(m);
  std::size_t art = n_struct;
  for (std::size_t i = 0; i < m; ++i) {
    const bool is_eq = i >= m_in;
    const QVec& a = is_eq ? P.E[i - m_in] : P.A[i];
    const Rational& rhs = is_eq ? P.f[i - m_in] : P.b[i];
    const bool flip = sgn(rhs) < 0;
    QVec row(ncols + 1, Rational(0));
    for (std::size_t j = 0; j < d; ++j) {
      if (a[j] == 0) continue;
      row[j] = flip ? Rational(-a[j]) : a[j];
      row[d + j] = flip ? a[j] : Rational(-a[j]);
    }
    if (!is_eq) row[2 * d + i] = flip ? -1 : 1;
    row[ncols] = flip ? Rational(-rhs) : rhs;
    if (!is_eq && !flip) {
      basis.push_back(2 * d + i);
    } else {
      row[art] = 1;
      basis.push_back(art);
      ++art;
    }
    rows.push_back(std::move(row));
  }

  Tableau tab(std::move(rows), std::move(basis), ncols);
  LpSolution out;
  if (n_art > 0) {
    QVec phase1 = zeros(ncols);
    for (std::size_t j = n_struct; j < ncols; ++j) phase1[j] = 1;
    tab.set_costs(phase1);
    std::size_t unused = 0;
    tab.run(&unused);
    if (sgn(tab.objective_value()) > 0) {
      out.status = LpStatus::kInfeasible;
      return out;
    }
    tab.expel_artificials(n_struct);
  }

  QVec cost = zeros(ncols);
  for (std::size_t j = 0; j < d; ++j) {
    cost[j] = c[j];
    cost[d + j] = -c[j];
  }
  tab.set_costs(cost);
  std::size_t entering = 0;
  const auto outcome = tab.run(&entering);
  const QVec y = tab.solution();
  out.x = zeros(d);
  for (std::size_t j = 0; j < d; ++j) out.x[j] = y[j] - y[d + j];
  if (outcome == Tableau::Outcome::kUnbounded) {
    const QVec dy = tab.ray(entering);
    out.status = LpStatus::kUnbounded;
    out.ray = zeros(d);
    for (std::size_t j = 0; j < d; ++j) out.ray[j] = dy[j] - dy[d + j];
    return out;
  }
  out.status = LpStatus::kOptimal;
  out.value = dot(c, out.x);
  return out;
}

std::optional<QVec> feasible_point(const HPolyhedron& P) {
  const LpSolution sol = minimize(P, zeros(P.dim));
  if (sol.status == LpStatus::kInfeasible) return std::nullopt;
  return sol.x;
}

void StrictSystem::add_strict(QVec row, Rational rhs) {
  if (row.size() != dim()) throw Error(ErrorKind::kDimensionMismatch, "strict row length");
  strict_lhs.push_back(std::move(row));
  strict_rhs.push_back(std::move(rhs));
}

HPolyhedron StrictSystem::closure() const {
  HPolyhedron P = closed;
  for (std::size_t i = 0; i < strict_lhs.size(); ++i) P.add_inequality(strict_lhs[i], strict_rhs[i]);
  return P;
}

bool StrictSystem::satisfied_by(const QVec& x) const {
  if (!closed.contains(x)) return false;
  for (std::size_t i = 0; i < strict_lhs.size(); ++i) {
    if (!(dot(strict_lhs[i], x) < strict_rhs[i])) return false;
  }
  return true;
}

std::optional<QVec> strictly_feasible_point(const StrictSystem& sys) {
  const std::size_t d = sys.dim();
  if (sys.strict_lhs.empty()) return feasible_point(sys.closed);
  // Variables (x, t): maximize t subject to strict rows a.x + t <= b and t <= 1.
  HPolyhedron lifted;
  lifted.dim = d + 1;
  auto lift = [&](const QVec& row, const Rational& t_coef) {
    QVec r = row;
    r.push_back(t_coef);
    return r;
  };
  for (std::size_t i = 0; i < sys.closed.A.size(); ++i) lifted.add_inequality(lift(sys.closed.A[i], 0), sys.closed.b[i]);
  for (std::size_t i = 0; i < sys.closed.E.size(); ++i) lifted.add_equality(lift(sys.closed.E[i], 0), sys.closed.f[i]);
  for (std::size_t i = 0; i < sys.strict_lhs.size(); ++i) lifted.add_inequality(lift(sys.strict_lhs[i], 1), sys.strict_rhs[i]);
  lifted.add_inequality(unit_vector(d + 1, d), 1);
  QVec objective = zeros(d + 1);
  objective[d] = -1;
  const LpSolution sol = minimize(lifted, objective);
  if (sol.status != LpStatus::kOptimal || sgn(sol.x[d]) <= 0) return std::nullopt;
  return slice(sol.x, 0, d);
}

}  // namespace monocone
