#pragma once

#include <string>
#include <vector>

#include "monocone/hpolyhedron.hpp"
#include "monocone/polyhedron.hpp"

namespace monocone {

/// Polyhedral cone kept in both descriptions:
///   {z : G z <= 0, F z = 0} = cone(rays) + span(lineality).
/// Both forms are built at construction, so the type is immutable afterwards.
class PolyCone {
 public:
  static constexpr std::size_t kMaxDim = 8;

  PolyCone() = default;
  static PolyCone from_halfspaces(std::size_t dim, QRows G, QRows F = {});
  static PolyCone from_generators(std::size_t dim, std::vector<QVec> rays, std::vector<QVec> lineality = {});
  static PolyCone zero(std::size_t dim);
  static PolyCone whole(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const QRows& G() const { return G_; }
  const QRows& F() const { return F_; }
  const std::vector<QVec>& rays() const { return rays_; }
  const std::vector<QVec>& lineality() const { return lineality_; }

  /// Generators with every lineality vector split into +l and -l.
  std::vector<QVec> conic_generators() const;

  bool contains(const QVec& z) const;
  bool is_zero() const { return rays_.empty() && lineality_.empty(); }
  HPolyhedron as_polyhedron() const;
  std::string to_string() const;

 private:
  std::size_t dim_ = 0;
  QRows G_;
  QRows F_;
  std::vector<QVec> rays_;
  std::vector<QVec> lineality_;
};

PolyCone cone_polar(const PolyCone& C);
bool cone_contains(const PolyCone& C, const QVec& z);
/// Intersection by concatenating the halfspace forms.
PolyCone cone_intersect(const PolyCone& A, const PolyCone& B);
/// A is a subset of B (every generator of A lies in B).
bool cone_subset(const PolyCone& A, const PolyCone& B);
bool cone_equal(const PolyCone& A, const PolyCone& B);

/// Minimum of <w, z> over the cone: 0 at z = 0, or unbounded with a generator ray.
SupportResult support_min(const PolyCone& C, const QVec& w);

}  // namespace monocone
