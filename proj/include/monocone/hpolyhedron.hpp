#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "monocone/linear_algebra.hpp"
#include "monocone/rational.hpp"

namespace monocone {

/// {x in R^d : A x <= b, E x = f} with exact rational data.
struct HPolyhedron {
  std::size_t dim = 0;
  QRows A;
  QVec b;
  QRows E;
  QVec f;

  static HPolyhedron whole_space(std::size_t d);
  static HPolyhedron point(const QVec& x);

  void add_inequality(QVec row, Rational rhs);
  void add_equality(QVec row, Rational rhs);

  std::size_t num_inequalities() const { return A.size(); }
  bool contains(const QVec& x) const;
  /// Indices of inequality rows holding with equality at x.
  std::vector<std::size_t> tight_rows(const QVec& x) const;

  std::string to_string() const;
};

}  // namespace monocone
