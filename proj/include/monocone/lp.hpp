#pragma once

#include <optional>
#include <vector>

#include "monocone/hpolyhedron.hpp"

namespace monocone {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  QVec x;          // optimal point (kOptimal) or a feasible point (kUnbounded)
  Rational value;  // optimal objective value
  QVec ray;        // recession direction with negative objective slope (kUnbounded)
};

/// Exact two-phase primal simplex with Bland's rule: minimize c.x over P.
LpSolution minimize(const HPolyhedron& P, const QVec& c);

/// Some point of P, or nullopt when P is empty.
std::optional<QVec> feasible_point(const HPolyhedron& P);

/// A linear system mixing equalities, non-strict and strict inequalities.
struct StrictSystem {
  HPolyhedron closed;  // equalities and non-strict inequalities
  QRows strict_lhs;    // strict_lhs x < strict_rhs
  QVec strict_rhs;

  explicit StrictSystem(std::size_t dim = 0) { closed.dim = dim; }
  std::size_t dim() const { return closed.dim; }
  void add_strict(QVec row, Rational rhs);
  /// Closure: every strict row relaxed to non-strict.
  HPolyhedron closure() const;
  bool satisfied_by(const QVec& x) const;
};

/// A point satisfying every strict row strictly, found by maximizing a common slack.
std::optional<QVec> strictly_feasible_point(const StrictSystem& sys);

}  // namespace monocone
