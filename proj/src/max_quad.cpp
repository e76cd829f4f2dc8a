#include "monocone/max_quad.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "monocone/error.hpp"
#include "monocone/polyhedron.hpp"

namespace monocone {

void MaxQuadFunction::validate() const {
  if (dim == 0) throw Error(ErrorKind::kInvalidArgument, "function dimension must be at least 1");
  if (pieces.empty()) throw Error(ErrorKind::kInvalidArgument, "function needs at least one piece");
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const Piece& pc = pieces[p];
    const std::string where = "piece " + std::to_string(p);
    if (pc.Q.size() != dim || pc.c.size() != dim) throw Error(ErrorKind::kDimensionMismatch, where + " has wrong size");
    for (const auto& row : pc.Q) {
      if (row.size() != dim) throw Error(ErrorKind::kDimensionMismatch, where + " has a ragged Q");
    }
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (pc.Q[i][j] != pc.Q[j][i]) throw Error(ErrorKind::kInvalidArgument, where + " has a non-symmetric Q");
      }
    }
  }
}

Rational MaxQuadFunction::piece_value(std::size_t i, const QVec& x) const {
  const Piece& p = pieces[i];
  return dot(x, mat_vec(p.Q, x)) / 2 + dot(p.c, x) + p.d;
}

Rational MaxQuadFunction::value(const QVec& x) const {
  if (x.size() != dim) throw Error(ErrorKind::kDimensionMismatch, "function argument length");
  Rational best = piece_value(0, x);
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    Rational v = piece_value(i, x);
    if (v > best) best = std::move(v);
  }
  return best;
}

namespace {

double piece_value_d(const MaxQuadFunction::Piece& p, const std::vector<double>& x) {
  const std::size_t n = x.size();
  double v = p.d.get_d();
  for (std::size_t i = 0; i < n; ++i) {
    double qx = 0;
    for (std::size_t j = 0; j < n; ++j) qx += p.Q[i][j].get_d() * x[j];
    v += 0.5 * x[i] * qx + p.c[i].get_d() * x[i];
  }
  return v;
}

}  // namespace

double MaxQuadFunction::value(const std::vector<double>& x) const {
  if (x.size() != dim) throw Error(ErrorKind::kDimensionMismatch, "function argument length");
  double best = -INFINITY;
  for (const auto& p : pieces) best = std::max(best, piece_value_d(p, x));
  return best;
}

QVec MaxQuadFunction::piece_gradient(std::size_t i, const QVec& x) const {
  return add(mat_vec(pieces[i].Q, x), pieces[i].c);
}

std::vector<std::size_t> MaxQuadFunction::active_pieces(const QVec& x) const {
  const Rational f = value(x);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (piece_value(i, x) == f) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> MaxQuadFunction::active_pieces(const std::vector<double>& x, double tol) const {
  const double f = value(x);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (piece_value_d(pieces[i], x) >= f - tol) out.push_back(i);
  }
  return out;
}

std::optional<QRows> MaxQuadFunction::shared_q() const {
  for (const auto& p : pieces) {
    if (p.Q != pieces.front().Q) return std::nullopt;
  }
  return pieces.front().Q;
}

double MaxQuadFunction::gradient_lipschitz_bound() const {
  double best = 0;
  for (const auto& p : pieces) {
    double s = 0;
    for (const auto& row : p.Q) {
      for (const auto& q : row) s += q.get_d() * q.get_d();
    }
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

std::string MaxQuadFunction::to_string() const {
  std::string s = "max{";
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i) s += ", ";
    s += "[Q=";
    for (const auto& row : pieces[i].Q) s += monocone::to_string(row);
    s += " c=" + monocone::to_string(pieces[i].c) + " d=" + pieces[i].d.get_str() + "]";
  }
  return s + "}";
}

MaxQuadFunction shifted_function(const MaxQuadFunction& f, const Rational& kappa) {
  MaxQuadFunction g = f;
  for (auto& p : g.pieces) {
    for (std::size_t i = 0; i < g.dim; ++i) p.Q[i][i] -= kappa;
  }
  return g;
}

PieceList prune_contained(PieceList pieces) {
  std::vector<bool> drop(pieces.size(), false);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = 0; j < pieces.size() && !drop[i]; ++j) {
      if (i == j || drop[j]) continue;
      if (!polyhedron_contains(pieces[j], pieces[i])) continue;
      // Equal pieces: keep the lower index.
      if (j > i && polyhedron_contains(pieces[i], pieces[j])) continue;
      drop[i] = true;
    }
  }
  PieceList out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (!drop[i]) out.push_back(std::move(pieces[i]));
  }
  return out;
}

namespace {

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
  mpz_class rn = sqrt(num);
  mpz_class rd = sqrt(den);
  return Rational(rn, rd);
}

MaxQuadFunction dedupe_pieces(const MaxQuadFunction& f) {
  MaxQuadFunction g;
  g.dim = f.dim;
  for (const auto& p : f.pieces) {
    bool seen = std::any_of(g.pieces.begin(), g.pieces.end(),
                            [&](const MaxQuadFunction::Piece& q) { return q.Q == p.Q && q.c == p.c && q.d == p.d; });
    if (!seen) g.pieces.push_back(p);
  }
  return g;
}

PieceList compile_one_dimensional(const MaxQuadFunction& f) {
  const std::size_t m = f.pieces.size();
  auto q = [&](std::size_t i) { return f.pieces[i].Q[0][0]; };
  auto c = [&](std::size_t i) { return f.pieces[i].c[0]; };
  auto d = [&](std::size_t i) { return f.pieces[i].d; };
  auto val = [&](std::size_t i, const Rational& t) { return f.piece_value(i, QVec{t}); };

  std::set<Rational> breaks;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const Rational a = (q(i) - q(j)) / 2;
      const Rational b = c(i) - c(j);
      const Rational k = d(i) - d(j);
      std::vector<Rational> roots;
      if (a == 0) {
        if (b != 0) roots.push_back(-k / b);
      } else {
        const Rational disc = b * b - 4 * a * k;
        if (sgn(disc) >= 0) {
          if (auto s = exact_sqrt(disc)) {
            roots.push_back((-b + *s) / (2 * a));
            roots.push_back((-b - *s) / (2 * a));
          } else {
            // Irrational crossing: harmless only if neither piece is maximal there.
            const double sd = std::sqrt(disc.get_d());
            for (double r : {(-b.get_d() + sd) / (2 * a.get_d()), (-b.get_d() - sd) / (2 * a.get_d())}) {
              const std::vector<double> x{r};
              const double fi = piece_value_d(f.pieces[i], x);
              if (fi >= f.value(x) - 1e-9 * (1 + std::abs(fi))) {
                throw Error(ErrorKind::kNotCompilable, "active pieces cross at an irrational breakpoint");
              }
            }
          }
        }
      }
      for (const auto& r : roots) {
        const Rational fr = f.value(QVec{r});
        if (val(i, r) == fr && val(j, r) == fr) breaks.insert(r);
      }
    }
  }

  const std::vector<Rational> t(breaks.begin(), breaks.end());
  PieceList out;
  auto argmax_at = [&](const Rational& x) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < m; ++i) {
      if (val(i, x) > val(best, x)) best = i;
    }
    return best;
  };
  auto line_piece = [&](std::size_t i, const Rational* lo, const Rational* hi) {
    HPolyhedron P = HPolyhedron::whole_space(2);
    P.add_equality({-q(i), 1}, c(i));
    if (lo) P.add_inequality({-1, 0}, -*lo);
    if (hi) P.add_inequality({1, 0}, *hi);
    out.push_back(std::move(P));
  };
  if (t.empty()) {
    line_piece(argmax_at(0), nullptr, nullptr);
    return out;
  }
  line_piece(argmax_at(t.front() - 1), nullptr, &t.front());
  for (std::size_t k = 0; k + 1 < t.size(); ++k) line_piece(argmax_at((t[k] + t[k + 1]) / 2), &t[k], &t[k + 1]);
  line_piece(argmax_at(t.back() + 1), &t.back(), nullptr);
  for (const auto& x : t) {
    const auto act = f.active_pieces(QVec{x});
    Rational lo = f.piece_gradient(act.front(), QVec{x})[0];
    Rational hi = lo;
    for (std::size_t i : act) {
      const Rational g = f.piece_gradient(i, QVec{x})[0];
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    HPolyhedron P = HPolyhedron::whole_space(2);
    P.add_equality({1, 0}, x);
    P.add_inequality({0, 1}, hi);
    P.add_inequality({0, -1}, -lo);
    out.push_back(std::move(P));
  }
  return prune_contained(std::move(out));
}

PieceList compile_shared_q(const MaxQuadFunction& f, const QRows& Q) {
  const std::size_t n = f.dim;
  const std::size_t m = f.pieces.size();
  if (m > 16) throw Error(ErrorKind::kNotCompilable, "too many affine parts for active-set enumeration");
  PieceList out;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<std::size_t> I;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) I.push_back(i);
    }
    const auto& p0 = f.pieces[I.front()];
    HPolyhedron region = HPolyhedron::whole_space(n);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == I.front()) continue;
      QVec row = sub(f.pieces[i].c, p0.c);
      const Rational rhs = p0.d - f.pieces[i].d;
      if (mask & (1u << i)) {
        region.add_equality(std::move(row), rhs);
      } else {
        region.add_inequality(std::move(row), rhs);
      }
    }
    if (is_empty(region)) continue;
    std::vector<QVec> grads;
    for (std::size_t i : I) grads.push_back(f.pieces[i].c);
    const HPolyhedron fiber = convex_hull(n, grads);

    // (u, y) with u in region, y in fiber, mapped to (u, Q u + y).
    HPolyhedron P = HPolyhedron::whole_space(2 * n);
    for (std::size_t r = 0; r < region.A.size(); ++r) P.add_inequality(concat(region.A[r], zeros(n)), region.b[r]);
    for (std::size_t r = 0; r < region.E.size(); ++r) P.add_equality(concat(region.E[r], zeros(n)), region.f[r]);
    for (std::size_t r = 0; r < fiber.A.size(); ++r) {
      P.add_inequality(concat(negate(mat_t_vec(Q, fiber.A[r], n)), fiber.A[r]), fiber.b[r]);
    }
    for (std::size_t r = 0; r < fiber.E.size(); ++r) {
      P.add_equality(concat(negate(mat_t_vec(Q, fiber.E[r], n)), fiber.E[r]), fiber.f[r]);
    }
    out.push_back(std::move(P));
  }
  return prune_contained(std::move(out));
}

}  // namespace

PieceList compile_subdifferential_graph(const MaxQuadFunction& f) {
  f.validate();
  const MaxQuadFunction g = dedupe_pieces(f);
  if (auto Q = g.shared_q()) return compile_shared_q(g, *Q);
  if (g.dim == 1) return compile_one_dimensional(g);
  throw Error(ErrorKind::kNotCompilable, "pieces with distinct quadratic parts in dimension " + std::to_string(g.dim));
}

}  // namespace monocone
