#include "monocone/operator_model.hpp"

#include <iostream>
#include <random>
#include <set>

#include "monocone/error.hpp"
#include "monocone/polyhedron.hpp"

namespace monocone {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

OperatorPtr wrap(std::size_t dim, auto variant) {
  auto T = std::make_shared<OperatorSpec>();
  T->dim = dim;
  T->variant = std::move(variant);
  return T;
}

void require_base(const OperatorPtr& base) {
  if (!base) throw Error(ErrorKind::kInvalidArgument, "combinator without a base operator");
}

}  // namespace

OperatorPtr make_rational_map(std::size_t dim, const std::vector<std::string>& expressions) {
  if (dim == 0) throw Error(ErrorKind::kInvalidArgument, "dimension must be at least 1");
  if (expressions.size() != dim) {
    throw Error(ErrorKind::kDimensionMismatch,
                "rational map has " + std::to_string(expressions.size()) + " components, expected " +
                    std::to_string(dim));
  }
  RationalMapSpec m;
  m.expressions = expressions;
  for (const auto& e : expressions) {
    RationalFunction r = parse_rational_function(e, dim);
    if (r.den.is_zero()) throw Error(ErrorKind::kInvalidArgument, "denominator is identically zero in " + e);
    m.components.push_back(std::move(r));
  }
  return wrap(dim, std::move(m));
}

OperatorPtr make_affine_box(QRows A, QVec b, std::vector<std::optional<Rational>> lo,
                            std::vector<std::optional<Rational>> hi) {
  const std::size_t n = b.size();
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "dimension must be at least 1");
  if (A.size() != n || lo.size() != n || hi.size() != n) throw Error(ErrorKind::kDimensionMismatch, "affine box sizes");
  for (const auto& row : A) {
    if (row.size() != n) throw Error(ErrorKind::kDimensionMismatch, "affine box matrix is not square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (lo[i] && hi[i] && *lo[i] > *hi[i]) {
      throw Error(ErrorKind::kInvalidArgument, "box bound lo > hi in coordinate " + std::to_string(i));
    }
  }
  return wrap(n, AffineBoxSpec{std::move(A), std::move(b), std::move(lo), std::move(hi)});
}

OperatorPtr make_polyhedral_graph(std::size_t dim, PieceList pieces) {
  if (dim == 0) throw Error(ErrorKind::kInvalidArgument, "dimension must be at least 1");
  PieceList kept;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].dim != 2 * dim) {
      throw Error(ErrorKind::kDimensionMismatch, "graph piece " + std::to_string(i) + " must live in R^" +
                                                     std::to_string(2 * dim));
    }
    if (is_empty(pieces[i])) {
      std::cerr << "warning: dropping empty graph piece " << i << "\n";
      continue;
    }
    kept.push_back(std::move(pieces[i]));
  }
  if (kept.empty()) throw Error(ErrorKind::kEmptySet, "every graph piece is empty");
  return wrap(dim, PolyhedralGraphSpec{std::move(kept)});
}

OperatorPtr make_max_quad_subdiff(MaxQuadFunction f) {
  f.validate();
  const std::size_t n = f.dim;
  return wrap(n, MaxQuadSubdiffSpec{std::move(f)});
}

OperatorPtr make_shift_identity(OperatorPtr base, Rational s) {
  require_base(base);
  const std::size_t n = base->dim;
  return wrap(n, ShiftIdentitySpec{std::move(base), std::move(s)});
}

OperatorPtr make_shift_down(OperatorPtr base, Rational kappa) {
  require_base(base);
  if (sgn(kappa) < 0) throw Error(ErrorKind::kInvalidArgument, "shift-down modulus must be nonnegative");
  const std::size_t n = base->dim;
  return wrap(n, ShiftDownSpec{std::move(base), std::move(kappa)});
}

OperatorPtr make_inverse(OperatorPtr base) {
  require_base(base);
  const std::size_t n = base->dim;
  return wrap(n, InverseSpec{std::move(base)});
}

std::string variant_name(const OperatorSpec& T) {
  return std::visit(Overloaded{
                        [](const RationalMapSpec&) { return std::string("rational_map"); },
                        [](const AffineBoxSpec&) { return std::string("affine_box"); },
                        [](const PolyhedralGraphSpec&) { return std::string("polyhedral_graph_union"); },
                        [](const MaxQuadSubdiffSpec&) { return std::string("max_quad_subdiff"); },
                        [](const ShiftIdentitySpec&) { return std::string("shift_identity"); },
                        [](const ShiftDownSpec&) { return std::string("shift_down"); },
                        [](const InverseSpec&) { return std::string("inverse"); },
                    },
                    T.variant);
}

bool ValueSet::contains(const QVec& v) const {
  for (const auto& p : points) {
    if (p == v) return true;
  }
  for (const auto& P : polyhedra) {
    if (P.contains(v)) return true;
  }
  return false;
}

std::string ValueSet::to_string() const {
  if (empty()) return "{}";
  std::string s;
  for (const auto& p : points) s += (s.empty() ? "" : " u ") + monocone::to_string(p);
  for (const auto& P : polyhedra) s += (s.empty() ? "" : " u ") + P.to_string();
  return s;
}

namespace {

void push_unique(std::vector<QVec>& out, QVec v) {
  for (const auto& p : out) {
    if (p == v) return;
  }
  out.push_back(std::move(v));
}

// Adds a slice polyhedron to a value set, turning singletons into points.
void add_slice(ValueSet& V, HPolyhedron P) {
  if (is_empty(P)) return;
  if (auto x = as_singleton(P)) {
    push_unique(V.points, std::move(*x));
    return;
  }
  V.polyhedra.push_back(std::move(P));
}

ValueSet shifted_values(const ValueSet& base, const QVec& t) {
  ValueSet V;
  for (const auto& p : base.points) V.points.push_back(add(p, t));
  for (const auto& P : base.polyhedra) V.polyhedra.push_back(translate(P, t));
  return V;
}

ValueSet slices_at(const PieceList& pieces, const QVec& u) {
  ValueSet V;
  for (const auto& P : pieces) add_slice(V, fix_leading(P, u));
  return V;
}

}  // namespace

ValueSet evaluate(const OperatorSpec& T, const QVec& u) {
  if (u.size() != T.dim) {
    throw Error(ErrorKind::kDimensionMismatch,
                "point has length " + std::to_string(u.size()) + ", operator dimension is " + std::to_string(T.dim));
  }
  const std::size_t n = T.dim;
  return std::visit(
      Overloaded{
          [&](const RationalMapSpec& m) {
            ValueSet V;
            QVec v(n);
            for (std::size_t i = 0; i < n; ++i) {
              auto r = m.components[i].evaluate(u);
              if (!r) return V;
              v[i] = *r;
            }
            V.points.push_back(std::move(v));
            return V;
          },
          [&](const AffineBoxSpec& a) {
            ValueSet V;
            const QVec center = add(mat_vec(a.A, u), a.b);
            bool degenerate = true;
            for (std::size_t i = 0; i < n; ++i) {
              if (!a.lo[i] || !a.hi[i] || *a.lo[i] != *a.hi[i]) degenerate = false;
            }
            if (degenerate) {
              QVec v = center;
              for (std::size_t i = 0; i < n; ++i) v[i] += *a.lo[i];
              V.points.push_back(std::move(v));
              return V;
            }
            HPolyhedron P = HPolyhedron::whole_space(n);
            for (std::size_t i = 0; i < n; ++i) {
              if (a.hi[i]) P.add_inequality(unit_vector(n, i), center[i] + *a.hi[i]);
              if (a.lo[i]) P.add_inequality(negate(unit_vector(n, i)), -(center[i] + *a.lo[i]));
            }
            V.polyhedra.push_back(std::move(P));
            return V;
          },
          [&](const PolyhedralGraphSpec& g) { return slices_at(g.pieces, u); },
          [&](const MaxQuadSubdiffSpec& m) {
            ValueSet V;
            std::vector<QVec> grads;
            for (std::size_t i : m.f.active_pieces(u)) push_unique(grads, m.f.piece_gradient(i, u));
            if (grads.size() == 1) {
              V.points.push_back(std::move(grads.front()));
            } else {
              V.polyhedra.push_back(convex_hull(n, grads));
            }
            return V;
          },
          [&](const ShiftIdentitySpec& s) { return shifted_values(evaluate(*s.base, u), scale(s.s, u)); },
          [&](const ShiftDownSpec& s) { return shifted_values(evaluate(*s.base, u), scale(-s.kappa, u)); },
          [&](const InverseSpec& inv) {
            ValueSet V;
            for (const auto& P : compile_to_polyhedral(*inv.base)) add_slice(V, fix_trailing(P, u));
            return V;
          },
      },
      T.variant);
}

bool in_domain(const OperatorSpec& T, const QVec& u) {
  if (has_full_domain(T)) return true;
  if (const auto* m = std::get_if<RationalMapSpec>(&T.variant)) {
    for (const auto& c : m->components) {
      if (c.den.evaluate(u) == 0) return false;
    }
    return true;
  }
  return !evaluate(T, u).empty();
}

bool has_full_domain(const OperatorSpec& T) {
  return std::visit(Overloaded{
                        [](const RationalMapSpec& m) {
                          for (const auto& c : m.components) {
                            if (!c.den.as_constant()) return false;
                          }
                          return true;
                        },
                        [](const AffineBoxSpec&) { return true; },
                        [](const PolyhedralGraphSpec&) { return false; },
                        [](const MaxQuadSubdiffSpec&) { return true; },
                        [](const ShiftIdentitySpec& s) { return has_full_domain(*s.base); },
                        [](const ShiftDownSpec& s) { return has_full_domain(*s.base); },
                        [](const InverseSpec&) { return false; },
                    },
                    T.variant);
}

std::vector<QVec> representative_values(const ValueSet& V) {
  std::vector<QVec> out = V.points;
  for (const auto& P : V.polyhedra) {
    const VertexRayEnumeration e = enumerate_vertices_rays(P);
    for (const auto& x : e.vertices) push_unique(out, x);
    QVec center;
    if (e.vertices.size() > 1 && e.rays.empty() && e.lineality.empty()) {
      center = zeros(P.dim);
      for (const auto& x : e.vertices) center = add(center, x);
      center = scale(Rational(1, static_cast<long>(e.vertices.size())), center);
    } else if (auto x = relative_interior_point(P)) {
      center = *x;
    }
    if (!center.empty()) push_unique(out, center);
    const QVec& base = e.vertices.empty() ? center : e.vertices.front();
    if (base.empty()) continue;
    for (const auto& r : e.rays) push_unique(out, add(base, r));
    for (const auto& l : e.lineality) {
      push_unique(out, add(base, l));
      push_unique(out, sub(base, l));
    }
  }
  return out;
}

namespace {

// (alpha, beta) rows over (u, v) of gph base become rows of gph(base + sI).
PieceList shift_pieces(const PieceList& pieces, const Rational& s, std::size_t n) {
  PieceList out;
  auto transform = [&](const QVec& row) {
    QVec r = row;
    for (std::size_t j = 0; j < n; ++j) r[j] -= s * row[n + j];
    return r;
  };
  for (const auto& P : pieces) {
    HPolyhedron Q = HPolyhedron::whole_space(2 * n);
    for (std::size_t i = 0; i < P.A.size(); ++i) Q.add_inequality(transform(P.A[i]), P.b[i]);
    for (std::size_t i = 0; i < P.E.size(); ++i) Q.add_equality(transform(P.E[i]), P.f[i]);
    out.push_back(std::move(Q));
  }
  return out;
}

PieceList swap_pieces(const PieceList& pieces, std::size_t n) {
  PieceList out;
  auto swap = [&](const QVec& row) { return concat(slice(row, n, n), slice(row, 0, n)); };
  for (const auto& P : pieces) {
    HPolyhedron Q = HPolyhedron::whole_space(2 * n);
    for (std::size_t i = 0; i < P.A.size(); ++i) Q.add_inequality(swap(P.A[i]), P.b[i]);
    for (std::size_t i = 0; i < P.E.size(); ++i) Q.add_equality(swap(P.E[i]), P.f[i]);
    out.push_back(std::move(Q));
  }
  return out;
}

PieceList compile_uncached(const OperatorSpec& T) {
  const std::size_t n = T.dim;
  return std::visit(
      Overloaded{
          [&](const RationalMapSpec& m) {
            HPolyhedron P = HPolyhedron::whole_space(2 * n);
            const QVec origin = zeros(n);
            for (std::size_t i = 0; i < n; ++i) {
              if (!m.components[i].is_affine()) {
                throw Error(ErrorKind::kNotCompilable, "rational map component " + m.expressions[i] + " is not affine");
              }
            }
            // v_i - grad_i . u = r_i(0)
            for (std::size_t i = 0; i < n; ++i) {
              QVec row = zeros(2 * n);
              for (std::size_t j = 0; j < n; ++j) row[j] = -*m.components[i].derivative(j).evaluate(origin);
              row[n + i] = 1;
              P.add_equality(std::move(row), *m.components[i].evaluate(origin));
            }
            return PieceList{std::move(P)};
          },
          [&](const AffineBoxSpec& a) {
            HPolyhedron P = HPolyhedron::whole_space(2 * n);
            for (std::size_t i = 0; i < n; ++i) {
              // lo_i <= v_i - A_i u - b_i <= hi_i
              QVec row = zeros(2 * n);
              for (std::size_t j = 0; j < n; ++j) row[j] = -a.A[i][j];
              row[n + i] = 1;
              if (a.lo[i] && a.hi[i] && *a.lo[i] == *a.hi[i]) {
                P.add_equality(row, a.b[i] + *a.lo[i]);
                continue;
              }
              if (a.hi[i]) P.add_inequality(row, a.b[i] + *a.hi[i]);
              if (a.lo[i]) P.add_inequality(negate(row), -(a.b[i] + *a.lo[i]));
            }
            return PieceList{std::move(P)};
          },
          [&](const PolyhedralGraphSpec& g) { return g.pieces; },
          [&](const MaxQuadSubdiffSpec& m) { return compile_subdifferential_graph(m.f); },
          [&](const ShiftIdentitySpec& s) { return shift_pieces(compile_to_polyhedral(*s.base), s.s, n); },
          [&](const ShiftDownSpec& s) { return shift_pieces(compile_to_polyhedral(*s.base), -s.kappa, n); },
          [&](const InverseSpec& inv) { return swap_pieces(compile_to_polyhedral(*inv.base), n); },
      },
      T.variant);
}

}  // namespace

PieceList compile_to_polyhedral(const OperatorSpec& T) {
  auto& cache = *T.compiled;
  std::call_once(cache.once, [&] {
    try {
      cache.pieces = compile_uncached(T);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNotCompilable) throw;
      cache.failure = e.what();
    }
  });
  if (!cache.pieces) throw Error(ErrorKind::kNotCompilable, cache.failure);
  return *cache.pieces;
}

bool is_compilable(const OperatorSpec& T) {
  try {
    compile_to_polyhedral(T);
    return true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNotCompilable) return false;
    throw;
  }
}

std::optional<QRows> rational_map_jacobian(const RationalMapSpec& m, const QVec& u) {
  const std::size_t n = u.size();
  QRows J(n, QVec(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (m.components[i].den.evaluate(u) == 0) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) J[i][j] = *m.components[i].derivative(j).evaluate(u);
  }
  return J;
}

SampleConfig SampleConfig::box(std::size_t dim, const Rational& lo, const Rational& hi, unsigned density,
                               std::uint64_t seed, double jitter) {
  SampleConfig c;
  c.lo = QVec(dim, lo);
  c.hi = QVec(dim, hi);
  c.density = density;
  c.seed = seed;
  c.jitter = jitter;
  return c;
}

void SampleConfig::validate(std::size_t dim) const {
  if (lo.size() != dim || hi.size() != dim) throw Error(ErrorKind::kDimensionMismatch, "sample region dimension");
  for (std::size_t i = 0; i < dim; ++i) {
    if (lo[i] > hi[i]) throw Error(ErrorKind::kInvalidArgument, "sample region has lo > hi");
  }
  if (density < 2) throw Error(ErrorKind::kInvalidArgument, "sample density must be at least 2");
  if (!(jitter >= 0.0 && jitter < 0.5)) throw Error(ErrorKind::kInvalidArgument, "jitter must lie in [0, 0.5)");
}

std::vector<GraphPoint> graph_sample(const OperatorSpec& T, const SampleConfig& cfg) {
  const std::size_t n = T.dim;
  cfg.validate(n);
  std::vector<GraphPoint> out;
  std::set<std::pair<QVec, QVec>> seen;
  auto emit = [&](const QVec& u, const QVec& v, std::string provenance) {
    if (seen.emplace(u, v).second) out.push_back(GraphPoint{u, v, std::move(provenance)});
  };
  auto in_region = [&](const QVec& u) {
    for (std::size_t i = 0; i < n; ++i) {
      if (u[i] < cfg.lo[i] || u[i] > cfg.hi[i]) return false;
    }
    return true;
  };

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<unsigned> idx(n, 0);
  for (;;) {
    QVec u(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Rational step = (cfg.hi[i] - cfg.lo[i]) / (cfg.density - 1);
      u[i] = cfg.lo[i] + step * idx[i];
      if (cfg.jitter > 0) u[i] += step * rational_from_double(cfg.jitter * unit(rng));
    }
    if (in_domain(T, u)) {
      for (const auto& v : representative_values(evaluate(T, u))) emit(u, v, "grid");
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == cfg.density) idx[k++] = 0;
    if (k == n) break;
  }

  // Polyhedral graphs: vertices of each piece in the region and a relative-interior point.
  if (is_compilable(T)) {
    const PieceList pieces = compile_to_polyhedral(T);
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      const std::string tag = "piece " + std::to_string(p);
      if (2 * n <= PolyCone::kMaxDim) {
        for (const auto& x : enumerate_vertices_rays(pieces[p]).vertices) {
          QVec u = slice(x, 0, n);
          if (in_region(u)) emit(u, slice(x, n, n), tag + " vertex");
        }
      }
      HPolyhedron clipped = pieces[p];
      for (std::size_t i = 0; i < n; ++i) {
        clipped.add_inequality(concat(unit_vector(n, i), zeros(n)), cfg.hi[i]);
        clipped.add_inequality(concat(negate(unit_vector(n, i)), zeros(n)), -cfg.lo[i]);
      }
      if (auto x = relative_interior_point(clipped)) emit(slice(*x, 0, n), slice(*x, n, n), tag + " relint");
    }
  }
  if (out.empty()) throw Error(ErrorKind::kEmptySample, "sample region misses the domain");
  return out;
}

}  // namespace monocone
