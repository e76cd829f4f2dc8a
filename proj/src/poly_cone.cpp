#include "monocone/poly_cone.hpp"

#include "monocone/error.hpp"

namespace monocone {

namespace {

void check_dim(std::size_t dim) {
  if (dim > PolyCone::kMaxDim) {
    throw Error(ErrorKind::kDimensionTooLarge, "cone conversion supports d <= " + std::to_string(PolyCone::kMaxDim));
  }
}

void check_rows(const QRows& rows, std::size_t dim) {
  for (const auto& r : rows) {
    if (r.size() != dim) throw Error(ErrorKind::kDimensionMismatch, "cone row length");
  }
}

}  // namespace

PolyCone PolyCone::from_halfspaces(std::size_t dim, QRows G, QRows F) {
  check_dim(dim);
  check_rows(G, dim);
  check_rows(F, dim);
  PolyCone C;
  C.dim_ = dim;
  ConeGenerators gens = enumerate_cone(dim, G, F);
  C.rays_ = std::move(gens.rays);
  C.lineality_ = std::move(gens.lineality);
  C.G_ = std::move(G);
  C.F_ = std::move(F);
  return C;
}

PolyCone PolyCone::from_generators(std::size_t dim, std::vector<QVec> rays, std::vector<QVec> lineality) {
  check_dim(dim);
  check_rows(rays, dim);
  check_rows(lineality, dim);
  // Facets of C are the extreme rays of its polar {y : <r, y> <= 0, <l, y> = 0}.
  ConeGenerators facets = enumerate_cone(dim, rays, lineality);
  PolyCone C = from_halfspaces(dim, std::move(facets.rays), std::move(facets.lineality));
  return C;
}

PolyCone PolyCone::zero(std::size_t dim) {
  QRows F;
  for (std::size_t i = 0; i < dim; ++i) F.push_back(unit_vector(dim, i));
  return from_halfspaces(dim, {}, std::move(F));
}

PolyCone PolyCone::whole(std::size_t dim) { return from_halfspaces(dim, {}, {}); }

std::vector<QVec> PolyCone::conic_generators() const {
  std::vector<QVec> out = rays_;
  for (const auto& l : lineality_) {
    out.push_back(l);
    out.push_back(negate(l));
  }
  return out;
}

bool PolyCone::contains(const QVec& z) const {
  if (z.size() != dim_) throw Error(ErrorKind::kDimensionMismatch, "cone membership length");
  for (const auto& g : G_) {
    if (sgn(dot(g, z)) > 0) return false;
  }
  for (const auto& f : F_) {
    if (sgn(dot(f, z)) != 0) return false;
  }
  return true;
}

HPolyhedron PolyCone::as_polyhedron() const {
  HPolyhedron P = HPolyhedron::whole_space(dim_);
  for (const auto& g : G_) P.add_inequality(g, 0);
  for (const auto& f : F_) P.add_equality(f, 0);
  return P;
}

std::string PolyCone::to_string() const {
  std::string s = "cone{rays:";
  for (const auto& r : rays_) s += " " + monocone::to_string(r);
  s += "; lineality:";
  for (const auto& l : lineality_) s += " " + monocone::to_string(l);
  return s + "}";
}

PolyCone cone_polar(const PolyCone& C) { return PolyCone::from_halfspaces(C.dim(), C.rays(), C.lineality()); }

bool cone_contains(const PolyCone& C, const QVec& z) { return C.contains(z); }

PolyCone cone_intersect(const PolyCone& A, const PolyCone& B) {
  if (A.dim() != B.dim()) throw Error(ErrorKind::kDimensionMismatch, "cone intersection");
  QRows G = A.G();
  G.insert(G.end(), B.G().begin(), B.G().end());
  QRows F = A.F();
  F.insert(F.end(), B.F().begin(), B.F().end());
  return PolyCone::from_halfspaces(A.dim(), std::move(G), std::move(F));
}

bool cone_subset(const PolyCone& A, const PolyCone& B) {
  if (A.dim() != B.dim()) throw Error(ErrorKind::kDimensionMismatch, "cone containment");
  for (const auto& g : A.conic_generators()) {
    if (!B.contains(g)) return false;
  }
  return true;
}

bool cone_equal(const PolyCone& A, const PolyCone& B) { return cone_subset(A, B) && cone_subset(B, A); }

SupportResult support_min(const PolyCone& C, const QVec& w) {
  if (w.size() != C.dim()) throw Error(ErrorKind::kDimensionMismatch, "support direction length");
  SupportResult out;
  out.argmin = zeros(C.dim());
  out.value = 0;
  for (const auto& g : C.conic_generators()) {
    if (sgn(dot(g, w)) < 0) {
      out.unbounded = true;
      out.ray = g;
      return out;
    }
  }
  return out;
}

}  // namespace monocone
