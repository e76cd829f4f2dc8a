#pragma once

#include <vector>

#include "monocone/linear_algebra.hpp"
#include "monocone/poly_cone.hpp"

namespace monocone {

/// Exact minimum of lambda' M lambda over the standard simplex.
struct SimplexQuadraticMin {
  Rational value;
  QVec lambda;  // a minimizer of smallest support
};

/// Enumerates supports S and solves the KKT system on each one exactly.
/// The smallest-support minimizer always gives a nonsingular bordered system,
/// so the result is the true minimum. M must be symmetric with size <= 20.
SimplexQuadraticMin simplex_quadratic_min(const QRows& M);

/// Symmetric bilinear form on R^d given as a matrix.
using BilinearForm = QRows;

/// Checks q(x) = x' B x >= 0 on the cone. On failure `witness` has q < 0.
struct CopositivityResult {
  bool copositive = true;
  Rational min_simplex_value;
  QVec witness;
};
CopositivityResult check_copositive(const PolyCone& C, const BilinearForm& B);

}  // namespace monocone
