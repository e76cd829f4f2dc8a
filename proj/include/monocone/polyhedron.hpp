#pragma once

#include <optional>
#include <vector>

#include "monocone/hpolyhedron.hpp"
#include "monocone/lp.hpp"

namespace monocone {

bool is_empty(const HPolyhedron& P);

/// A point in the relative interior (every non-implicit-equality row strictly slack).
std::optional<QVec> relative_interior_point(const HPolyhedron& P);

/// The sole point of P, or nullopt when P is empty or has more than one point.
std::optional<QVec> as_singleton(const HPolyhedron& P);

/// inner is a subset of outer (exact, one LP per row of outer).
bool polyhedron_contains(const HPolyhedron& outer, const HPolyhedron& inner);

HPolyhedron intersect(const HPolyhedron& P, const HPolyhedron& Q);
HPolyhedron translate(const HPolyhedron& P, const QVec& t);

/// {y : (x, y) in P} for P in R^(k + m), fixing the first k coordinates to x.
HPolyhedron fix_leading(const HPolyhedron& P, const QVec& x);
/// {x : (x, y) in P}, fixing the trailing coordinates to y.
HPolyhedron fix_trailing(const HPolyhedron& P, const QVec& y);

/// Minimum of <w, z> over a nonempty set.
struct SupportResult {
  bool unbounded = false;
  Rational value;  // valid when !unbounded
  QVec argmin;     // minimizer, or a feasible base point of the unbounded ray
  QVec ray;        // direction with <w, ray> < 0 when unbounded
};

SupportResult support_min(const HPolyhedron& S, const QVec& w);

struct VertexRayEnumeration {
  std::vector<QVec> vertices;
  std::vector<QVec> rays;       // extreme rays of the pointed part, normalized
  std::vector<QVec> lineality;  // basis of the lineality space
};

/// Public enumeration entry point, restricted to d <= 4.
VertexRayEnumeration vertex_ray_enumerate(const HPolyhedron& P);
/// Same enumeration without the dimension guard; callers keep d small.
VertexRayEnumeration enumerate_vertices_rays(const HPolyhedron& P);

/// Extreme rays and lineality basis of {h : G h <= 0, F h = 0}.
struct ConeGenerators {
  std::vector<QVec> rays;
  std::vector<QVec> lineality;
};
ConeGenerators enumerate_cone(std::size_t dim, const QRows& G, const QRows& F);

/// H-representation of conv(points) + cone(rays).
HPolyhedron convex_hull(std::size_t dim, const std::vector<QVec>& points, const std::vector<QVec>& rays = {});

}  // namespace monocone
