#include "monocone/polyhedron.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "monocone/error.hpp"

namespace monocone {

HPolyhedron HPolyhedron::whole_space(std::size_t d) {
  HPolyhedron P;
  P.dim = d;
  return P;
}

HPolyhedron HPolyhedron::point(const QVec& x) {
  HPolyhedron P = whole_space(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) P.add_equality(unit_vector(x.size(), i), x[i]);
  return P;
}

void HPolyhedron::add_inequality(QVec row, Rational rhs) {
  if (row.size() != dim) throw Error(ErrorKind::kDimensionMismatch, "inequality row length");
  A.push_back(std::move(row));
  b.push_back(std::move(rhs));
}

void HPolyhedron::add_equality(QVec row, Rational rhs) {
  if (row.size() != dim) throw Error(ErrorKind::kDimensionMismatch, "equality row length");
  E.push_back(std::move(row));
  f.push_back(std::move(rhs));
}

bool HPolyhedron::contains(const QVec& x) const {
  if (x.size() != dim) throw Error(ErrorKind::kDimensionMismatch, "membership point length");
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (dot(A[i], x) > b[i]) return false;
  }
  for (std::size_t i = 0; i < E.size(); ++i) {
    if (dot(E[i], x) != f[i]) return false;
  }
  return true;
}

std::vector<std::size_t> HPolyhedron::tight_rows(const QVec& x) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (dot(A[i], x) == b[i]) out.push_back(i);
  }
  return out;
}

std::string HPolyhedron::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < A.size(); ++i) s += " " + monocone::to_string(A[i]) + ".x <= " + b[i].get_str() + ";";
  for (std::size_t i = 0; i < E.size(); ++i) s += " " + monocone::to_string(E[i]) + ".x = " + f[i].get_str() + ";";
  return s + " }";
}

bool is_empty(const HPolyhedron& P) { return !feasible_point(P).has_value(); }

std::optional<QVec> relative_interior_point(const HPolyhedron& P) {
  StrictSystem all_strict(P.dim);
  all_strict.closed.E = P.E;
  all_strict.closed.f = P.f;
  for (std::size_t i = 0; i < P.A.size(); ++i) all_strict.add_strict(P.A[i], P.b[i]);
  if (auto x = strictly_feasible_point(all_strict)) return x;
  if (is_empty(P)) return std::nullopt;

  // Split rows into implicit equalities and rows that can be made slack.
  StrictSystem sys(P.dim);
  sys.closed.E = P.E;
  sys.closed.f = P.f;
  for (std::size_t i = 0; i < P.A.size(); ++i) {
    const LpSolution sol = minimize(P, P.A[i]);
    if (sol.status == LpStatus::kOptimal && sol.value == P.b[i]) {
      sys.closed.add_equality(P.A[i], P.b[i]);
    } else {
      sys.add_strict(P.A[i], P.b[i]);
    }
  }
  return strictly_feasible_point(sys);
}

std::optional<QVec> as_singleton(const HPolyhedron& P) {
  auto x = feasible_point(P);
  if (!x) return std::nullopt;
  for (std::size_t j = 0; j < P.dim; ++j) {
    QVec e = unit_vector(P.dim, j);
    const LpSolution lo = minimize(P, e);
    if (lo.status != LpStatus::kOptimal || lo.value != (*x)[j]) return std::nullopt;
    const LpSolution hi = minimize(P, negate(e));
    if (hi.status != LpStatus::kOptimal || -hi.value != (*x)[j]) return std::nullopt;
  }
  return x;
}

bool polyhedron_contains(const HPolyhedron& outer, const HPolyhedron& inner) {
  if (outer.dim != inner.dim) throw Error(ErrorKind::kDimensionMismatch, "containment of different dimensions");
  if (is_empty(inner)) return true;
  for (std::size_t i = 0; i < outer.A.size(); ++i) {
    const LpSolution sol = minimize(inner, negate(outer.A[i]));
    if (sol.status != LpStatus::kOptimal || -sol.value > outer.b[i]) return false;
  }
  for (std::size_t i = 0; i < outer.E.size(); ++i) {
    const LpSolution lo = minimize(inner, outer.E[i]);
    if (lo.status != LpStatus::kOptimal || lo.value != outer.f[i]) return false;
    const LpSolution hi = minimize(inner, negate(outer.E[i]));
    if (hi.status != LpStatus::kOptimal || -hi.value != outer.f[i]) return false;
  }
  return true;
}

HPolyhedron intersect(const HPolyhedron& P, const HPolyhedron& Q) {
  if (P.dim != Q.dim) throw Error(ErrorKind::kDimensionMismatch, "intersection of different dimensions");
  HPolyhedron R = P;
  for (std::size_t i = 0; i < Q.A.size(); ++i) R.add_inequality(Q.A[i], Q.b[i]);
  for (std::size_t i = 0; i < Q.E.size(); ++i) R.add_equality(Q.E[i], Q.f[i]);
  return R;
}

HPolyhedron translate(const HPolyhedron& P, const QVec& t) {
  HPolyhedron R = P;
  for (std::size_t i = 0; i < R.A.size(); ++i) R.b[i] += dot(R.A[i], t);
  for (std::size_t i = 0; i < R.E.size(); ++i) R.f[i] += dot(R.E[i], t);
  return R;
}

namespace {

// Restricts P to the coordinates [keep_offset, keep_offset + keep) with the rest fixed to `fixed`.
HPolyhedron fix_coordinates(const HPolyhedron& P, const QVec& fixed, std::size_t fixed_offset,
                            std::size_t keep_offset, std::size_t keep) {
  HPolyhedron R = HPolyhedron::whole_space(keep);
  bool infeasible = false;
  auto reduce = [&](const QVec& row, const Rational& rhs, bool equality) {
    QVec part = slice(row, keep_offset, keep);
    const Rational r = rhs - dot(slice(row, fixed_offset, fixed.size()), fixed);
    if (is_zero(part)) {
      if (equality ? r != 0 : sgn(r) < 0) infeasible = true;
      return;
    }
    if (equality) {
      R.add_equality(std::move(part), r);
    } else {
      R.add_inequality(std::move(part), r);
    }
  };
  for (std::size_t i = 0; i < P.A.size(); ++i) reduce(P.A[i], P.b[i], false);
  for (std::size_t i = 0; i < P.E.size(); ++i) reduce(P.E[i], P.f[i], true);
  if (infeasible) R.add_inequality(zeros(keep), -1);
  return R;
}

}  // namespace

HPolyhedron fix_leading(const HPolyhedron& P, const QVec& x) {
  if (x.size() > P.dim) throw Error(ErrorKind::kDimensionMismatch, "fixed block longer than polyhedron");
  return fix_coordinates(P, x, 0, x.size(), P.dim - x.size());
}

HPolyhedron fix_trailing(const HPolyhedron& P, const QVec& y) {
  if (y.size() > P.dim) throw Error(ErrorKind::kDimensionMismatch, "fixed block longer than polyhedron");
  const std::size_t k = P.dim - y.size();
  return fix_coordinates(P, y, k, 0, k);
}

SupportResult support_min(const HPolyhedron& S, const QVec& w) {
  const LpSolution sol = minimize(S, w);
  if (sol.status == LpStatus::kInfeasible) throw Error(ErrorKind::kEmptySet, "support of an empty polyhedron");
  SupportResult out;
  out.argmin = sol.x;
  if (sol.status == LpStatus::kUnbounded) {
    out.unbounded = true;
    out.ray = sol.ray;
  } else {
    out.value = sol.value;
  }
  return out;
}

namespace {

bool satisfies_cone(const QRows& G, const QVec& r) {
  for (const auto& g : G) {
    if (sgn(dot(g, r)) > 0) return false;
  }
  return true;
}

// Enumerates index subsets of size k of [0, m), keeping only those whose rows
// stay linearly independent on top of `base` (already in echelon form).
void for_each_independent_subset(const QRows& base, const QRows& rows, std::size_t dim, std::size_t k,
                                 const std::function<void(const QRows&)>& visit) {
  QRows chosen = base;
  const std::size_t base_rank = rank(base, dim);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t left) {
    if (left == 0) {
      visit(chosen);
      return;
    }
    for (std::size_t i = start; i + left <= rows.size(); ++i) {
      chosen.push_back(rows[i]);
      if (rank(chosen, dim) == base_rank + (k - left) + 1) rec(i + 1, left - 1);
      chosen.pop_back();
    }
  };
  rec(0, k);
}

}  // namespace

ConeGenerators enumerate_cone(std::size_t dim, const QRows& G, const QRows& F) {
  ConeGenerators out;
  QRows all = G;
  all.insert(all.end(), F.begin(), F.end());
  out.lineality = null_space(all, dim);

  QRows W = F;
  W.insert(W.end(), out.lineality.begin(), out.lineality.end());
  W = row_reduce(W, dim).rows;
  const std::size_t rw = W.size();
  if (rw >= dim) return out;
  const std::size_t k = dim - rw - 1;

  std::set<QVec> found;
  for_each_independent_subset(W, G, dim, k, [&](const QRows& M) {
    const QRows ns = null_space(M, dim);
    if (ns.size() != 1) return;
    const QVec& r = ns.front();
    if (satisfies_cone(G, r)) {
      found.insert(normalize_direction(r));
    } else if (QVec neg = negate(r); satisfies_cone(G, neg)) {
      found.insert(normalize_direction(neg));
    }
  });
  out.rays.assign(found.begin(), found.end());
  return out;
}

VertexRayEnumeration enumerate_vertices_rays(const HPolyhedron& P) {
  const std::size_t d = P.dim;
  VertexRayEnumeration out;
  QRows all = P.A;
  all.insert(all.end(), P.E.begin(), P.E.end());
  const QRows lineality = null_space(all, d);

  QRows W = P.E;
  QVec w_rhs = P.f;
  for (const auto& l : lineality) {
    W.push_back(l);
    w_rhs.push_back(0);
  }
  const std::size_t rw = rank(W, d);
  if (rw > d) return out;
  const std::size_t k = d - rw;

  std::set<QVec> vertices;
  // Subset search over inequality rows, carrying their rhs alongside.
  std::vector<std::size_t> idx;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (idx.size() == k) {
      QRows M = W;
      QVec rhs = w_rhs;
      for (std::size_t i : idx) {
        M.push_back(P.A[i]);
        rhs.push_back(P.b[i]);
      }
      auto x = solve_unique(M, rhs, d);
      if (x && P.contains(*x)) vertices.insert(*x);
      return;
    }
    for (std::size_t i = start; i + (k - idx.size()) <= P.A.size(); ++i) {
      idx.push_back(i);
      QRows M = W;
      for (std::size_t j : idx) M.push_back(P.A[j]);
      if (rank(M, d) == rw + idx.size()) rec(i + 1);
      idx.pop_back();
    }
  };
  if (rw == d || k <= P.A.size()) rec(0);
  if (vertices.empty()) return out;

  out.vertices.assign(vertices.begin(), vertices.end());
  ConeGenerators rec_cone = enumerate_cone(d, P.A, P.E);
  out.rays = std::move(rec_cone.rays);
  out.lineality = std::move(rec_cone.lineality);
  return out;
}

VertexRayEnumeration vertex_ray_enumerate(const HPolyhedron& P) {
  if (P.dim > 4) throw Error(ErrorKind::kDimensionTooLarge, "vertex/ray enumeration supports d <= 4");
  return enumerate_vertices_rays(P);
}

HPolyhedron convex_hull(std::size_t dim, const std::vector<QVec>& points, const std::vector<QVec>& rays) {
  if (points.empty()) throw Error(ErrorKind::kEmptySet, "convex hull of no points");
  // Homogenize: C = cone{(p, 1)} + cone{(r, 0)}; its polar's generators are C's facets.
  QRows polar_rows;
  for (const auto& p : points) {
    QVec row = p;
    row.push_back(1);
    polar_rows.push_back(std::move(row));
  }
  for (const auto& r : rays) {
    QVec row = r;
    row.push_back(0);
    polar_rows.push_back(std::move(row));
  }
  const ConeGenerators polar = enumerate_cone(dim + 1, polar_rows, {});
  HPolyhedron P = HPolyhedron::whole_space(dim);
  for (const auto& h : polar.rays) {
    QVec a = slice(h, 0, dim);
    if (is_zero(a)) continue;  // the homogenizing facet t >= 0
    P.add_inequality(std::move(a), -h[dim]);
  }
  for (const auto& m : polar.lineality) {
    QVec a = slice(m, 0, dim);
    if (is_zero(a)) continue;
    P.add_equality(std::move(a), -m[dim]);
  }
  return P;
}

}  // namespace monocone
