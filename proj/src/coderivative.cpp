#include "monocone/coderivative.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "monocone/error.hpp"
#include "monocone/polyhedron.hpp"

namespace monocone {

std::string_view kind_name(CoderivativeKind kind) {
  return kind == CoderivativeKind::kRegular ? "regular" : "limiting";
}

CoderivativeKind parse_kind(std::string_view text) {
  if (text == "regular") return CoderivativeKind::kRegular;
  if (text == "limiting") return CoderivativeKind::kLimiting;
  throw Error(ErrorKind::kInvalidArgument, "kind must be 'regular' or 'limiting', got '" + std::string(text) + "'");
}

std::string CoderivativeValue::type() const {
  if (empty()) return "empty";
  return polyhedra.empty() ? "points" : "polyhedra";
}

bool CoderivativeValue::contains(const QVec& z) const {
  for (const auto& p : points) {
    if (p == z) return true;
  }
  for (const auto& P : polyhedra) {
    if (P.contains(z)) return true;
  }
  return false;
}

std::string CoderivativeValue::to_string() const {
  if (empty()) return "{}";
  std::string s;
  for (const auto& p : points) s += (s.empty() ? "" : " u ") + monocone::to_string(p);
  for (const auto& P : polyhedra) s += (s.empty() ? "" : " u ") + P.to_string();
  return s;
}

namespace {

void add_value_piece(CoderivativeValue& out, HPolyhedron P) {
  if (is_empty(P)) return;
  if (auto z = as_singleton(P)) {
    for (const auto& p : out.points) {
      if (p == *z) return;
    }
    out.points.push_back(std::move(*z));
    return;
  }
  for (const auto& Q : out.polyhedra) {
    if (polyhedron_contains(Q, P) && polyhedron_contains(P, Q)) return;
  }
  out.polyhedra.push_back(std::move(P));
}

HPolyhedron cone_slice(const PolyCone& K, const QVec& w) {
  const std::size_t n = w.size();
  if (K.dim() != 2 * n) throw Error(ErrorKind::kDimensionMismatch, "direction length does not match the graph");
  HPolyhedron P = HPolyhedron::whole_space(n);
  for (const auto& g : K.G()) P.add_inequality(slice(g, 0, n), dot(slice(g, n, n), w));
  for (const auto& f : K.F()) P.add_equality(slice(f, 0, n), dot(slice(f, n, n), w));
  return P;
}

}  // namespace

CoderivativeValue value_from_cone(const PolyCone& K, const QVec& w, CoderivativeKind kind) {
  CoderivativeValue out;
  out.w = w;
  out.kind = kind;
  add_value_piece(out, cone_slice(K, w));
  return out;
}

CoderivativeValue value_from_cones(const std::vector<PolyCone>& cones, const QVec& w, CoderivativeKind kind) {
  CoderivativeValue out;
  out.w = w;
  out.kind = kind;
  for (const auto& K : cones) add_value_piece(out, cone_slice(K, w));
  return out;
}

bool value_subset(const CoderivativeValue& a, const CoderivativeValue& b) {
  for (const auto& p : a.points) {
    if (!b.contains(p)) return false;
  }
  for (const auto& P : a.polyhedra) {
    bool inside = false;
    for (const auto& Q : b.polyhedra) {
      if (polyhedron_contains(Q, P)) {
        inside = true;
        break;
      }
    }
    if (!inside) return false;
  }
  return true;
}

bool values_equal(const CoderivativeValue& a, const CoderivativeValue& b) {
  return value_subset(a, b) && value_subset(b, a);
}

namespace {

PolyCone map_cone(const PolyCone& K, const std::function<QVec(const QVec&)>& map) {
  std::vector<QVec> rays;
  std::vector<QVec> lin;
  for (const auto& r : K.rays()) rays.push_back(map(r));
  for (const auto& l : K.lineality()) lin.push_back(map(l));
  return PolyCone::from_generators(K.dim(), std::move(rays), std::move(lin));
}

// Normal vectors (z, y) of gph(base) at (u, v - s u) become (z - s y, y) for gph(base + sI).
std::function<QVec(const QVec&)> shift_map(const Rational& s, std::size_t n) {
  return [s, n](const QVec& g) {
    QVec r = g;
    for (std::size_t j = 0; j < n; ++j) r[j] -= s * g[n + j];
    return r;
  };
}

std::function<QVec(const QVec&)> swap_map(std::size_t n) {
  return [n](const QVec& g) { return concat(slice(g, n, n), slice(g, 0, n)); };
}

// Normal space {(J' q, -q)} of the graph of a map with Jacobian J.
PolyCone smooth_graph_cone(const QRows& J) {
  const std::size_t n = J.size();
  std::vector<QVec> lin;
  for (std::size_t k = 0; k < n; ++k) {
    QVec g = zeros(2 * n);
    for (std::size_t j = 0; j < n; ++j) g[j] = J[k][j];
    g[n + k] = -1;
    lin.push_back(std::move(g));
  }
  return PolyCone::from_generators(2 * n, {}, std::move(lin));
}

std::optional<std::size_t> unique_active_piece(const MaxQuadFunction& f, const QVec& u) {
  const auto act = f.active_pieces(u);
  if (act.size() != 1) return std::nullopt;
  return act.front();
}

void check_on_graph(const OperatorSpec& T, const QVec& u, const QVec& v) {
  if (u.size() != T.dim || v.size() != T.dim) throw Error(ErrorKind::kDimensionMismatch, "graph point length");
  if (!evaluate(T, u).contains(v)) {
    throw Error(ErrorKind::kNotOnGraph, "(" + to_string(u) + ", " + to_string(v) + ") is not in gph T");
  }
}

PolyCone regular_cone_of(const OperatorSpec& T, const QVec& u, const QVec& v) {
  const std::size_t n = T.dim;
  if (is_compilable(T)) return regular_normal_cone_union(compile_to_polyhedral(T), concat(u, v));
  if (const auto* m = std::get_if<RationalMapSpec>(&T.variant)) {
    auto J = rational_map_jacobian(*m, u);
    if (!J) throw Error(ErrorKind::kNotOnGraph, "point outside the domain");
    return smooth_graph_cone(*J);
  }
  if (const auto* q = std::get_if<MaxQuadSubdiffSpec>(&T.variant)) {
    auto i = unique_active_piece(q->f, u);
    if (!i) throw Error(ErrorKind::kUnsupportedVariant, "regular coderivative at a kink of a non-compilable max of quadratics");
    return smooth_graph_cone(q->f.pieces[*i].Q);
  }
  if (const auto* s = std::get_if<ShiftIdentitySpec>(&T.variant)) {
    return map_cone(regular_cone_of(*s->base, u, sub(v, scale(s->s, u))), shift_map(s->s, n));
  }
  if (const auto* s = std::get_if<ShiftDownSpec>(&T.variant)) {
    const Rational neg = -s->kappa;
    return map_cone(regular_cone_of(*s->base, u, sub(v, scale(neg, u))), shift_map(neg, n));
  }
  if (const auto* inv = std::get_if<InverseSpec>(&T.variant)) {
    return map_cone(regular_cone_of(*inv->base, v, u), swap_map(n));
  }
  throw Error(ErrorKind::kUnsupportedVariant, "no regular cone for " + variant_name(T));
}

std::optional<std::vector<PolyCone>> limiting_cones_of(const OperatorSpec& T, const QVec& u, const QVec& v) {
  const std::size_t n = T.dim;
  if (is_compilable(T)) return limiting_normal_cone_union(compile_to_polyhedral(T), concat(u, v));
  if (std::holds_alternative<RationalMapSpec>(T.variant)) return std::vector<PolyCone>{regular_cone_of(T, u, v)};
  if (const auto* q = std::get_if<MaxQuadSubdiffSpec>(&T.variant)) {
    if (!unique_active_piece(q->f, u)) return std::nullopt;
    return std::vector<PolyCone>{regular_cone_of(T, u, v)};
  }
  auto map_all = [](std::optional<std::vector<PolyCone>> cones, const std::function<QVec(const QVec&)>& map) {
    if (!cones) return cones;
    for (auto& K : *cones) K = map_cone(K, map);
    return cones;
  };
  if (const auto* s = std::get_if<ShiftIdentitySpec>(&T.variant)) {
    return map_all(limiting_cones_of(*s->base, u, sub(v, scale(s->s, u))), shift_map(s->s, n));
  }
  if (const auto* s = std::get_if<ShiftDownSpec>(&T.variant)) {
    const Rational neg = -s->kappa;
    return map_all(limiting_cones_of(*s->base, u, sub(v, scale(neg, u))), shift_map(neg, n));
  }
  if (const auto* inv = std::get_if<InverseSpec>(&T.variant)) {
    return map_all(limiting_cones_of(*inv->base, v, u), swap_map(n));
  }
  return std::nullopt;
}

}  // namespace

CoderivativeEngine::CoderivativeEngine(OperatorPtr T, SampleSchedule schedule)
    : T_(std::move(T)), schedule_(schedule) {
  if (!T_) throw Error(ErrorKind::kInvalidArgument, "engine without an operator");
  if (is_compilable(*T_)) pieces_ = compile_to_polyhedral(*T_);
}

const PieceList& CoderivativeEngine::pieces() const {
  if (!pieces_) throw Error(ErrorKind::kNotCompilable, variant_name(*T_) + " has no exact polyhedral graph");
  return *pieces_;
}

const std::vector<Stratum>& CoderivativeEngine::strata() const {
  const PieceList& p = pieces();
  std::call_once(strata_->once, [&] { strata_->strata = enumerate_strata(p); });
  return strata_->strata;
}

void CoderivativeEngine::require_on_graph(const QVec& u, const QVec& v) const { check_on_graph(*T_, u, v); }

PolyCone CoderivativeEngine::regular_cone(const QVec& u, const QVec& v) const {
  require_on_graph(u, v);
  return regular_cone_of(*T_, u, v);
}

std::optional<std::vector<PolyCone>> CoderivativeEngine::limiting_cones(const QVec& u, const QVec& v) const {
  require_on_graph(u, v);
  return limiting_cones_of(*T_, u, v);
}

CoderivativeValue CoderivativeEngine::regular(const QVec& u, const QVec& v, const QVec& w) const {
  if (w.size() != T_->dim) throw Error(ErrorKind::kDimensionMismatch, "direction length");
  return value_from_cone(regular_cone(u, v), w, CoderivativeKind::kRegular);
}

CoderivativeValue CoderivativeEngine::limiting(const QVec& u, const QVec& v, const QVec& w) const {
  if (w.size() != T_->dim) throw Error(ErrorKind::kDimensionMismatch, "direction length");
  if (auto cones = limiting_cones(u, v)) return value_from_cones(*cones, w, CoderivativeKind::kLimiting);
  return sampled_limiting(*T_, u, v, w);
}

CoderivativeValue CoderivativeEngine::compute(CoderivativeKind kind, const QVec& u, const QVec& v,
                                              const QVec& w) const {
  return kind == CoderivativeKind::kRegular ? regular(u, v, w) : limiting(u, v, w);
}

CoderivativeValue CoderivativeEngine::sampled_limiting(const OperatorSpec& T, const QVec& u, const QVec& v,
                                                       const QVec& w) const {
  const std::size_t n = T.dim;
  if (const auto* s = std::get_if<ShiftIdentitySpec>(&T.variant)) {
    CoderivativeValue base = sampled_limiting(*s->base, u, sub(v, scale(s->s, u)), w);
    for (auto& p : base.points) p = add(p, scale(s->s, w));
    return base;
  }
  if (const auto* s = std::get_if<ShiftDownSpec>(&T.variant)) {
    CoderivativeValue base = sampled_limiting(*s->base, u, add(v, scale(s->kappa, u)), w);
    for (auto& p : base.points) p = sub(p, scale(s->kappa, w));
    return base;
  }
  const auto* q = std::get_if<MaxQuadSubdiffSpec>(&T.variant);
  if (!q) throw Error(ErrorKind::kUnsupportedVariant, "no sampled limiting coderivative for " + variant_name(T));

  CoderivativeValue out;
  out.w = w;
  out.kind = CoderivativeKind::kLimiting;
  out.exact = false;
  out.schedule = schedule_;
  std::vector<std::vector<double>> seen;
  auto add_point = [&](QVec z) {
    const std::vector<double> zd = to_doubles(z);
    for (const auto& s : seen) {
      double diff = 0;
      for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(s[i] - zd[i]));
      if (diff <= schedule_.dedup_tol) return;
    }
    seen.push_back(zd);
    out.points.push_back(std::move(z));
  };
  if (auto i = unique_active_piece(q->f, u)) add_point(mat_vec(q->f.pieces[*i].Q, w));

  std::mt19937_64 rng(schedule_.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::vector<double> ud = to_doubles(u);
  const std::vector<double> vd = to_doubles(v);
  for (int k = 0; k <= schedule_.halvings; ++k) {
    const double r = schedule_.r0 * std::ldexp(1.0, -k);
    for (int dir = 0; dir < schedule_.directions; ++dir) {
      std::vector<double> d(n);
      double norm = 0;
      for (auto& x : d) {
        x = normal(rng);
        norm += x * x;
      }
      norm = std::sqrt(norm);
      if (norm == 0) continue;
      QVec u2(n);
      // Offset r/2 in u leaves room for the value gap within graph distance r.
      for (std::size_t i = 0; i < n; ++i) u2[i] = rational_from_double(ud[i] + 0.5 * r * d[i] / norm);
      ++out.sample_count;
      auto i = unique_active_piece(q->f, u2);
      if (!i) continue;
      const QVec v2 = q->f.piece_gradient(*i, u2);
      double dist = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const double du = to_double(u2[j]) - ud[j];
        const double dv = to_double(v2[j]) - vd[j];
        dist += du * du + dv * dv;
      }
      if (std::sqrt(dist) <= r) add_point(mat_vec(q->f.pieces[*i].Q, w));
    }
  }
  return out;
}

CoderivativeValue coderivative_shift(const OperatorPtr& T, const Rational& s, const QVec& u, const QVec& v,
                                     const QVec& w, CoderivativeKind kind) {
  CoderivativeEngine base(T);
  CoderivativeValue out = base.compute(kind, u, sub(v, scale(s, u)), w);
  const QVec sw = scale(s, w);
  for (auto& p : out.points) p = add(p, sw);
  for (auto& P : out.polyhedra) P = translate(P, sw);
  return out;
}

SecondOrderValue second_order_combined(const MaxQuadFunction& f, const QVec& u, const QVec& v, const QVec& w) {
  return CoderivativeEngine(make_max_quad_subdiff(f)).regular(u, v, w);
}

SecondOrderValue second_order_limiting(const MaxQuadFunction& f, const QVec& u, const QVec& v, const QVec& w) {
  return CoderivativeEngine(make_max_quad_subdiff(f)).limiting(u, v, w);
}

}  // namespace monocone
