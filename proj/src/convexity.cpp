#include "monocone/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "monocone/error.hpp"
#include "monocone/lp.hpp"

namespace monocone {

namespace {

std::vector<double> gradient_double(const MaxQuadFunction& f, std::size_t i, const std::vector<double>& x) {
  const auto& p = f.pieces[i];
  std::vector<double> g(f.dim);
  for (std::size_t r = 0; r < f.dim; ++r) {
    double s = to_double(p.c[r]);
    for (std::size_t k = 0; k < f.dim; ++k) s += to_double(p.Q[r][k]) * x[k];
    g[r] = s;
  }
  return g;
}

double norm(const std::vector<double>& x) { return std::sqrt(squared_norm(std::span<const double>(x))); }

}  // namespace

// ------------------------------------------------------------ subgradients

bool Subgradients::contains(const QVec& v) const {
  if (generators.empty()) return false;
  const std::size_t m = generators.size();
  const std::size_t n = v.size();
  // lambda >= 0, sum lambda = 1, sum lambda_i g_i = v.
  HPolyhedron P = HPolyhedron::whole_space(m);
  for (std::size_t i = 0; i < m; ++i) P.add_inequality(negate(unit_vector(m, i)), 0);
  P.add_equality(QVec(m, Rational(1)), 1);
  for (std::size_t r = 0; r < n; ++r) {
    QVec row(m);
    for (std::size_t i = 0; i < m; ++i) row[i] = generators[i][r];
    P.add_equality(std::move(row), v[r]);
  }
  return feasible_point(P).has_value();
}

double Subgradients::max_norm() const {
  double best = 0.0;
  for (const auto& g : generators) best = std::max(best, std::sqrt(to_double(squared_norm(g))));
  return best;
}

Subgradients subdifferential(const MaxQuadFunction& f, const QVec& x) {
  if (x.size() != f.dim) throw Error(ErrorKind::kDimensionMismatch, "point length differs from the function dimension");
  Subgradients out;
  for (std::size_t i : f.active_pieces(x)) {
    QVec g = f.piece_gradient(i, x);
    if (std::find(out.generators.begin(), out.generators.end(), g) == out.generators.end()) {
      out.generators.push_back(std::move(g));
    }
  }
  return out;
}

std::vector<std::vector<double>> subdifferential(const MaxQuadFunction& f, const std::vector<double>& x,
                                                 double activity_tol) {
  if (x.size() != f.dim) throw Error(ErrorKind::kDimensionMismatch, "point length differs from the function dimension");
  std::vector<std::vector<double>> out;
  for (std::size_t i : f.active_pieces(x, activity_tol)) out.push_back(gradient_double(f, i, x));
  return out;
}

Rational midpoint_gap(const MaxQuadFunction& f, const QVec& x, const QVec& y, const Rational& lambda,
                      const Rational& kappa) {
  const Rational mu = 1 - lambda;
  const QVec m = add(scale(lambda, x), scale(mu, y));
  const Rational rhs = lambda * f.value(x) + mu * f.value(y) - kappa / 2 * lambda * mu * squared_norm(sub(x, y));
  return f.value(m) - rhs;
}

std::string convexity_kind_name(ConvexityKind kind) {
  switch (kind) {
    case ConvexityKind::kConvex:
      return "Convex";
    case ConvexityKind::kNotConvex:
      return "NotConvex";
    case ConvexityKind::kStronglyConvex:
      return "StronglyConvex";
    case ConvexityKind::kNotStronglyConvex:
      return "NotStronglyConvex";
    case ConvexityKind::kInconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

ConvexityConfig ConvexityConfig::standard(std::size_t dim) {
  ConvexityConfig cfg;
  cfg.region = SampleConfig::box(dim, -3, 3, dim == 1 ? 13 : 7);
  return cfg;
}

// ---------------------------------------------------------- primal search

std::optional<MidpointWitness> primal_witness_search(const MaxQuadFunction& f, const QVec& u,
                                                     const std::vector<QVec>& directions, const Rational& kappa) {
  const std::size_t n = f.dim;
  std::vector<QVec> centers{u};
  for (int j = 2; j <= 6; ++j) {
    const Rational step(1, 1L << j);
    for (std::size_t i = 0; i < n; ++i) {
      centers.push_back(add(u, scale(step, unit_vector(n, i))));
      centers.push_back(sub(u, scale(step, unit_vector(n, i))));
    }
  }
  std::vector<QVec> dirs;
  for (const auto& d : directions) {
    if (!is_zero(d)) dirs.push_back(d);
  }
  for (std::size_t i = 0; i < n; ++i) dirs.push_back(unit_vector(n, i));

  const Rational half(1, 2);
  for (const auto& c : centers) {
    for (const auto& d : dirs) {
      Rational t = 1;
      for (int k = 0; k <= 20; ++k, t /= 2) {
        const QVec x = add(c, scale(t, d));
        const QVec y = sub(c, scale(t, d));
        const Rational gap = midpoint_gap(f, x, y, half, kappa);
        if (sgn(gap) > 0) return MidpointWitness{x, y, half, gap};
      }
    }
  }
  return std::nullopt;
}

// ------------------------------------------------------- second order

ConvexityVerdict second_order_threshold_check(const MaxQuadFunction& f, const Rational& kappa,
                                              const ConvexityConfig& cfg) {
  f.validate();
  if (sgn(kappa) < 0) throw Error(ErrorKind::kInvalidArgument, "kappa must be nonnegative");
  const bool strong = sgn(kappa) > 0;
  const CoderivativeEngine engine(make_max_quad_subdiff(f), cfg.schedule);
  const QueryPlan plan = make_query_plan(engine, cfg.region, true, cfg.max_points);

  ConvexityVerdict out;
  out.kappa = kappa;
  out.combined = psd_coderivative_check(engine, CoderivativeKind::kRegular, kappa, plan);
  out.limiting = psd_coderivative_check(engine, CoderivativeKind::kLimiting, kappa, plan);
  out.exact = out.combined.exact && out.limiting.exact;

  if (out.combined.passes() && out.limiting.passes()) {
    if (out.exact) {
      out.kind = strong ? ConvexityKind::kStronglyConvex : ConvexityKind::kConvex;
      out.reason = "second-order threshold holds on every stratum";
    } else {
      out.kind = ConvexityKind::kInconclusive;
      out.reason = "second-order values are sampled; no positive verdict without an exact graph";
    }
    return out;
  }

  const PSDReport& bad = out.combined.passes() ? out.limiting : out.combined;
  out.kind = strong ? ConvexityKind::kNotStronglyConvex : ConvexityKind::kNotConvex;
  out.second_order = bad.witness;
  out.reason = std::string(kind_name(bad.kind)) + " second-order value violates the threshold";
  if (out.second_order) {
    out.primal = primal_witness_search(f, out.second_order->point.u, {out.second_order->w}, kappa);
  }
  out.primal_missing = !out.primal.has_value();
  return out;
}

ConvexityVerdict convexity_check_second_order(const MaxQuadFunction& f, const ConvexityConfig& cfg) {
  return second_order_threshold_check(f, 0, cfg);
}

ConvexityVerdict strong_convexity_check(const MaxQuadFunction& f, const Rational& kappa, const ConvexityConfig& cfg) {
  ConvexityVerdict direct = second_order_threshold_check(f, kappa, cfg);
  if (sgn(kappa) == 0) return direct;
  const ConvexityVerdict shifted = second_order_threshold_check(shifted_function(f, kappa), 0, cfg);
  const bool direct_pass = direct.combined.passes() && direct.limiting.passes();
  const bool shifted_pass = shifted.combined.passes() && shifted.limiting.passes();
  if (direct_pass != shifted_pass || direct.exact != shifted.exact) {
    throw Error(ErrorKind::kRoutesDisagree, "threshold and shifted-function routes differ at kappa = " +
                                                kappa.get_str() + " for " + f.to_string());
  }
  return direct;
}

ModulusEstimate strong_modulus_estimate(const MaxQuadFunction& f, const std::vector<Rational>& kappa_grid,
                                        const ConvexityConfig& cfg) {
  ModulusEstimate out;
  for (const auto& kappa : kappa_grid) {
    const bool ok = strong_convexity_check(f, kappa, cfg).positive();
    out.results.emplace_back(kappa, ok);
    if (ok && (!out.kappa_star || kappa > *out.kappa_star)) out.kappa_star = kappa;
  }
  return out;
}

// ----------------------------------------------------------------- oracle

OracleResult convexity_oracle_sampling(const MaxQuadFunction& f, std::size_t triple_count, std::uint64_t seed,
                                       const Rational& kappa, const Rational& half_width) {
  if (triple_count == 0) throw Error(ErrorKind::kInvalidArgument, "triple_count must be positive");
  constexpr long kDen = 64;
  const long range = static_cast<long>(std::floor(to_double(half_width) * kDen));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coord(-range, range);
  std::uniform_int_distribution<long> weight(1, 15);

  OracleResult out;
  out.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < triple_count; ++k) {
    QVec x(f.dim), y(f.dim);
    for (auto& q : x) q = ratio(coord(rng), kDen);
    for (auto& q : y) q = ratio(coord(rng), kDen);
    const Rational lambda = ratio(weight(rng), 16);
    const Rational gap = midpoint_gap(f, x, y, lambda, kappa);
    ++out.checked;
    out.min_margin = std::min(out.min_margin, -to_double(gap));
    if (to_double(gap) > 1e-10) {
      out.passes = false;
      out.witness = MidpointWitness{x, y, lambda, gap};
      return out;
    }
  }
  return out;
}

// ------------------------------------------------------ mean-value bound

MeanValueReport mean_value_inequality_test(const MaxQuadFunction& f, const std::vector<double>& a,
                                           const std::vector<double>& b, double eps, unsigned grid_density) {
  const std::size_t n = f.dim;
  if (a.size() != n || b.size() != n) throw Error(ErrorKind::kDimensionMismatch, "segment endpoint length");
  if (!(eps > 0)) throw Error(ErrorKind::kInvalidArgument, "eps must be positive");
  if (grid_density < 2) throw Error(ErrorKind::kInvalidArgument, "grid density must be at least 2");

  MeanValueReport rep;
  rep.lhs = std::abs(f.value(b) - f.value(a));
  std::vector<double> d(n), lo(n), h(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = b[i] - a[i];
    lo[i] = std::min(a[i], b[i]) - eps;
    h[i] = (std::max(a[i], b[i]) + eps - lo[i]) / (grid_density - 1);
  }
  rep.segment_length = norm(d);
  rep.spacing = 0.5 * norm(h);
  const double dd = squared_norm(std::span<const double>(d));

  auto dist_to_segment = [&](const std::vector<double>& x) {
    double t = 0;
    if (dd > 0) {
      for (std::size_t i = 0; i < n; ++i) t += (x[i] - a[i]) * d[i];
      t = std::clamp(t / dd, 0.0, 1.0);
    }
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += (x[i] - a[i] - t * d[i]) * (x[i] - a[i] - t * d[i]);
    return std::sqrt(s);
  };

  std::vector<std::vector<double>> grid;
  std::vector<unsigned> idx(n, 0);
  for (;;) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = lo[i] + h[i] * idx[i];
    if (dist_to_segment(x) <= eps + rep.spacing) grid.push_back(std::move(x));
    std::size_t k = 0;
    while (k < n && ++idx[k] == grid_density) idx[k++] = 0;
    if (k == n) break;
  }
  rep.grid_points = grid.size();

  const double L = f.gradient_lipschitz_bound();
  double all_pieces = 0;
  for (const auto& x : grid) {
    for (std::size_t i = 0; i < f.pieces.size(); ++i) all_pieces = std::max(all_pieces, norm(gradient_double(f, i, x)));
    for (const auto& g : subdifferential(f, x)) rep.grid_sup = std::max(rep.grid_sup, norm(g));
  }
  // Any piece active somewhere within `spacing` of a grid point is within 2 M spacing of the max there.
  const double M = all_pieces + L * rep.spacing;
  const double tol = 2 * M * rep.spacing + 1e-12;
  double near_sup = 0;
  for (const auto& x : grid) {
    for (const auto& g : subdifferential(f, x, tol)) near_sup = std::max(near_sup, norm(g));
  }
  rep.bound = near_sup + L * rep.spacing;
  rep.passes = rep.lhs <= rep.segment_length * rep.bound * (1 + 1e-12) + 1e-12;
  return rep;
}

}  // namespace monocone
