#include "monocone/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "monocone/copositivity.hpp"
#include "monocone/error.hpp"
#include "monocone/parallel.hpp"
#include "monocone/polyhedron.hpp"

namespace monocone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Rational pair_product(const GraphPoint& a, const GraphPoint& b) { return dot(sub(a.v, b.v), sub(a.u, b.u)); }

double norm2(const QVec& x) { return std::sqrt(to_double(squared_norm(x))); }

}  // namespace

// ---------------------------------------------------------------- pairwise

PairwiseReport pairwise_monotone_test(const OperatorSpec& T, const std::vector<GraphPoint>& samples) {
  if (samples.size() < 2) throw Error(ErrorKind::kTooFewSamples, "pairwise test needs at least two samples");
  const std::size_t N = samples.size();
  const std::size_t n = T.dim;
  std::vector<std::vector<double>> U(N), V(N);
  for (std::size_t i = 0; i < N; ++i) {
    if (samples[i].u.size() != n || samples[i].v.size() != n) {
      throw Error(ErrorKind::kDimensionMismatch, "sample dimension differs from the operator");
    }
    U[i] = to_doubles(samples[i].u);
    V[i] = to_doubles(samples[i].v);
  }
  struct RowBest {
    double product = kInf;
    std::size_t pj = 0;
    double quotient = kInf;
    std::size_t qj = 0;
  };
  std::vector<RowBest> rows(N);
  parallel_for(N, [&](std::size_t i) {
    RowBest best;
    for (std::size_t j = i + 1; j < N; ++j) {
      double prod = 0;
      double dist2 = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const double du = U[i][k] - U[j][k];
        prod += (V[i][k] - V[j][k]) * du;
        dist2 += du * du;
      }
      if (prod < best.product) {
        best.product = prod;
        best.pj = j;
      }
      if (dist2 > 0) {
        const double q = prod / dist2;
        if (q < best.quotient) {
          best.quotient = q;
          best.qj = j;
        }
      }
    }
    rows[i] = best;
  });

  PairwiseReport out;
  out.pairs = N * (N - 1) / 2;
  std::size_t pi = N, qi = N;
  for (std::size_t i = 0; i < N; ++i) {
    if (rows[i].product < out.inf_product) {
      out.inf_product = rows[i].product;
      pi = i;
    }
    if (rows[i].quotient < out.inf_quotient) {
      out.inf_quotient = rows[i].quotient;
      qi = i;
    }
  }
  if (pi < N) {
    out.witness = std::make_pair(samples[pi], samples[rows[pi].pj]);
    out.witness_product = pair_product(out.witness->first, out.witness->second);
    out.inf_product = to_double(out.witness_product);
  }
  if (qi < N) {
    const GraphPoint& a = samples[qi];
    const GraphPoint& b = samples[rows[qi].qj];
    out.quotient_witness = std::make_pair(a, b);
    out.inf_quotient = to_double(pair_product(a, b) / squared_norm(sub(a.u, b.u)));
  }
  return out;
}

// ------------------------------------------------------- hypomonotonicity

CloseSchedule CloseSchedule::standard() {
  CloseSchedule s;
  Rational d(1, 10);
  for (int k = 0; k < 6; ++k) {
    s.distances.push_back(d);
    d /= 10;
  }
  return s;
}

bool Ball::contains(const QVec& u) const { return squared_norm(sub(u, center)) <= radius * radius; }

HypomonotonicityReport hypomonotonicity_estimate(const OperatorSpec& T, const std::vector<GraphPoint>& input,
                                                 const CloseSchedule& schedule, const std::optional<Ball>& ball) {
  std::vector<GraphPoint> samples;
  for (const auto& p : input) {
    if (!ball || ball->contains(p.u)) samples.push_back(p);
  }
  if (samples.size() < 2) throw Error(ErrorKind::kTooFewSamples, "hypomonotonicity estimate needs two samples");
  const std::size_t n = T.dim;

  HypomonotonicityReport out;
  const PairwiseReport base = pairwise_monotone_test(T, samples);
  out.inf_quotient = base.inf_quotient;
  out.witness = base.quotient_witness;

  // Centers: distinct u in sample order, with their sampled values.
  std::vector<QVec> centers;
  std::map<QVec, std::vector<QVec>> values_at;
  for (const auto& p : samples) {
    auto& vals = values_at[p.u];
    if (vals.empty()) {
      if (centers.size() >= schedule.max_centers) {
        values_at.erase(p.u);
        continue;
      }
      centers.push_back(p.u);
    }
    if (vals.size() < 4) vals.push_back(p.v);
  }

  struct LevelResult {
    double min_q = kInf;
    bool any = false;
    std::optional<std::pair<GraphPoint, GraphPoint>> worst;
  };
  const std::size_t L = schedule.distances.size();
  std::vector<std::vector<LevelResult>> per_center(centers.size(), std::vector<LevelResult>(L));
  parallel_for(centers.size(), [&](std::size_t c) {
    const QVec& u = centers[c];
    for (std::size_t l = 0; l < L; ++l) {
      const Rational& eps = schedule.distances[l];
      const Rational eps2 = eps * eps;
      LevelResult& res = per_center[c][l];
      for (std::size_t j = 0; j < n; ++j) {
        for (int sign : {1, -1}) {
          QVec u2 = u;
          u2[j] += sign * eps;
          if (ball && !ball->contains(u2)) continue;
          if (!in_domain(T, u2)) continue;
          for (const auto& v2 : representative_values(evaluate(T, u2))) {
            for (const auto& v : values_at.at(u)) {
              const Rational q = dot(sub(v2, v), sub(u2, u)) / eps2;
              const double qd = to_double(q);
              res.any = true;
              if (qd < res.min_q) {
                res.min_q = qd;
                res.worst = std::make_pair(GraphPoint{u, v, "sample"}, GraphPoint{u2, v2, "close pair"});
              }
            }
          }
        }
      }
    }
  });

  for (std::size_t l = 0; l < L; ++l) {
    CloseLevel level;
    level.distance = schedule.distances[l];
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const LevelResult& r = per_center[c][l];
      if (!r.any) continue;
      level.any_pairs = true;
      if (r.min_q < level.min_quotient) level.min_quotient = r.min_q;
      if (r.min_q < out.inf_quotient) {
        out.inf_quotient = r.min_q;
        out.witness = r.worst;
      }
    }
    if (level.any_pairs) level.scaled_blowup = -to_double(level.distance) * level.min_quotient;
    out.levels.push_back(level);
  }

  std::vector<const CloseLevel*> used;
  for (const auto& l : out.levels) {
    if (l.any_pairs) used.push_back(&l);
  }
  if (used.size() >= 2) {
    const double last = used[used.size() - 1]->scaled_blowup;
    const double prev = used[used.size() - 2]->scaled_blowup;
    out.divergent = last > kTieTolerance && last >= 0.5 * prev;
  }
  out.r_hat = out.divergent ? kInf : std::max(0.0, -out.inf_quotient);
  return out;
}

std::vector<Rational> default_radii() { return {Rational(1), Rational(1, 2), Rational(1, 4), Rational(1, 8)}; }

namespace {

std::vector<GraphPoint> ball_sample(const OperatorSpec& T, const QVec& center, const Rational& radius,
                                    unsigned density) {
  const std::size_t n = T.dim;
  std::vector<GraphPoint> out;
  const Ball ball{center, radius};
  std::vector<unsigned> idx(n, 0);
  auto emit = [&](const QVec& u) {
    if (!ball.contains(u) || !in_domain(T, u)) return;
    for (const auto& v : representative_values(evaluate(T, u))) out.push_back(GraphPoint{u, v, "window"});
  };
  emit(center);
  for (;;) {
    QVec u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = center[i] - radius + 2 * radius * idx[i] / (density - 1);
    if (u != center) emit(u);
    std::size_t k = 0;
    while (k < n && ++idx[k] == density) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

}  // namespace

std::optional<SemilocalWindow> semilocal_hypomonotonicity(const OperatorSpec& T, const QVec& center,
                                                          const std::vector<Rational>& radii, unsigned density) {
  if (center.size() != T.dim) throw Error(ErrorKind::kDimensionMismatch, "window center length");
  if (!in_domain(T, center)) throw Error(ErrorKind::kNotInDomain, to_string(center) + " is not in dom T");
  if (density < 2) throw Error(ErrorKind::kInvalidArgument, "window density must be at least 2");
  for (const auto& delta : radii) {
    const std::vector<GraphPoint> samples = ball_sample(T, center, delta, density);
    if (samples.size() < 2) continue;
    const HypomonotonicityReport rep =
        hypomonotonicity_estimate(T, samples, CloseSchedule::standard(), Ball{center, delta});
    if (!rep.divergent) return SemilocalWindow{center, delta, rep.r_hat};
  }
  return std::nullopt;
}

// -------------------------------------------------------------- PSD check

std::vector<QVec> unit_directions(std::size_t n) {
  std::vector<QVec> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(unit_vector(n, i));
    out.push_back(negate(unit_vector(n, i)));
  }
  const Rational a(3, 5), b(4, 5);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
        for (int si : {1, -1}) {
          for (int sj : {1, -1}) {
            QVec w = zeros(n);
            w[i] = si * x;
            w[j] = sj * y;
            out.push_back(std::move(w));
          }
        }
      }
    }
  }
  return out;
}

QueryPlan make_query_plan(const CoderivativeEngine& engine, const SampleConfig& cfg, bool exhaustive,
                          std::size_t max_points) {
  QueryPlan plan;
  std::vector<GraphPoint> pts = graph_sample(engine.op(), cfg);
  if (pts.size() > max_points) {
    std::vector<GraphPoint> thin;
    for (std::size_t k = 0; k < max_points; ++k) thin.push_back(pts[k * pts.size() / max_points]);
    pts = std::move(thin);
  }
  plan.points = std::move(pts);
  plan.directions = unit_directions(engine.op().dim);
  plan.exhaustive = exhaustive && engine.polyhedral();
  return plan;
}

namespace {

struct QueryOutcome {
  bool skipped = false;
  bool exact = true;
  double margin = kInf;
  std::optional<PSDWitness> witness;
};

// Exact cones at a graph point, or nullopt when values need the per-direction fallback.
std::optional<std::vector<PolyCone>> point_cones(const CoderivativeEngine& engine, CoderivativeKind kind,
                                                 const GraphPoint& p) {
  try {
    if (kind == CoderivativeKind::kRegular) return std::vector<PolyCone>{engine.regular_cone(p.u, p.v)};
    return engine.limiting_cones(p.u, p.v);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kUnsupportedVariant) throw;
    return std::nullopt;
  }
}

QueryOutcome evaluate_query(const CoderivativeEngine& engine, CoderivativeKind kind, const Rational& kappa,
                            const GraphPoint& p, const QVec& w, const std::optional<std::vector<PolyCone>>& cones) {
  QueryOutcome out;
  CoderivativeValue value;
  try {
    if (cones) {
      value = kind == CoderivativeKind::kRegular ? value_from_cone(cones->front(), w, kind)
                                                 : value_from_cones(*cones, w, kind);
    } else {
      value = engine.compute(kind, p.u, p.v, w);
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kUnsupportedVariant) throw;
    out.skipped = true;
    out.exact = false;
    return out;
  }
  out.exact = value.exact;
  const Rational threshold = kappa * squared_norm(w);
  auto consider = [&](const QVec& z, const Rational& m) {
    const double md = to_double(m);
    if (!out.witness || md < out.margin) {
      out.margin = md;
      out.witness = PSDWitness{p, w, z, m, "query"};
    }
  };
  for (const auto& z : value.points) consider(z, dot(z, w) - threshold);
  for (const auto& P : value.polyhedra) {
    const SupportResult s = support_min(P, w);
    if (!s.unbounded) {
      consider(s.argmin, s.value - threshold);
      continue;
    }
    // Walk along the ray until the margin is at most -1 so the witness is re-checkable.
    const Rational slope = dot(s.ray, w);
    Rational t = (dot(s.argmin, w) - threshold + 1) / -slope;
    if (sgn(t) < 0) t = 0;
    const QVec z = add(s.argmin, scale(t, s.ray));
    out.margin = -kInf;
    out.witness = PSDWitness{p, w, z, dot(z, w) - threshold, "query (unbounded below)"};
    break;
  }
  return out;
}

}  // namespace

PSDReport psd_coderivative_check(const CoderivativeEngine& engine, CoderivativeKind kind, const Rational& kappa,
                                 const QueryPlan& plan) {
  PSDReport rep;
  rep.kind = kind;
  rep.kappa = kappa;
  const std::size_t D = plan.directions.size();
  const std::size_t Q = plan.points.size() * D;
  std::vector<QueryOutcome> outcomes(Q);
  parallel_for(plan.points.size(), [&](std::size_t i) {
    const GraphPoint& p = plan.points[i];
    const auto cones = point_cones(engine, kind, p);
    for (std::size_t d = 0; d < D; ++d) outcomes[i * D + d] = evaluate_query(engine, kind, kappa, p, plan.directions[d], cones);
  });
  bool all_exact = true;
  for (const auto& o : outcomes) {
    ++rep.queries;
    if (o.skipped) ++rep.skipped;
    if (!o.exact) all_exact = false;
    if (o.witness && o.margin < rep.worst_margin) {
      rep.worst_margin = o.margin;
      rep.witness = o.witness;
    }
  }

  rep.exhaustive = plan.exhaustive && engine.polyhedral();
  if (rep.exhaustive) {
    const std::vector<Stratum>& strata = engine.strata();
    rep.strata = strata.size();
    const std::size_t n = engine.op().dim;
    // q(z, y) = -<z, y> - kappa |y|^2 with y = -w.
    BilinearForm B(2 * n, zeros(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
      B[i][n + i] = Rational(-1, 2);
      B[n + i][i] = Rational(-1, 2);
      B[n + i][n + i] = -kappa;
    }
    std::vector<CopositivityResult> results(strata.size());
    parallel_for(strata.size(), [&](std::size_t s) { results[s] = check_copositive(strata[s].cone, B); });
    for (std::size_t s = 0; s < strata.size(); ++s) {
      if (results[s].copositive) continue;
      const QVec& g = results[s].witness;
      const QVec z = slice(g, 0, n);
      const QVec w = negate(slice(g, n, n));
      const Rational margin = (dot(z, w) - kappa * squared_norm(w)) / squared_norm(w);
      const double md = to_double(margin);
      if (md < rep.worst_margin || (rep.witness && rep.witness->source != "stratum" && md <= rep.worst_margin)) {
        rep.worst_margin = std::min(rep.worst_margin, md);
        const QVec& x = strata[s].witness;
        rep.witness = PSDWitness{GraphPoint{slice(x, 0, n), slice(x, n, n), "stratum " + strata[s].signature.to_string()},
                                 w, z, margin, "stratum"};
      }
    }
  }
  rep.exact = rep.exhaustive && all_exact;
  return rep;
}

// ------------------------------------------------------------------ Minty

std::vector<QVec> default_y_grid(std::size_t n) {
  std::vector<QVec> out;
  if (n == 1) {
    for (int k = 0; k <= 20; ++k) out.push_back(QVec{Rational(-5) + ratio(k, 2)});
    return out;
  }
  const int per_axis = n == 2 ? 9 : 5;
  const Rational lo = n == 2 ? -4 : -2;
  std::vector<int> idx(n, 0);
  for (;;) {
    QVec y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = lo + idx[i];
    out.push_back(std::move(y));
    std::size_t k = 0;
    while (k < n && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

Rational default_shift(double r_hat) {
  if (!std::isfinite(r_hat)) throw Error(ErrorKind::kShiftTooSmall, "no finite shift exceeds an infinite modulus");
  return rational_from_double(std::max(2 * r_hat, r_hat + 1));
}

namespace {

MintySolve solve_polyhedral(const PieceList& pieces, const Rational& s, const QVec& y) {
  const std::size_t n = y.size();
  MintySolve out;
  out.y = y;
  for (const auto& P : pieces) {
    // (u, v) in P with v = y - s u.
    HPolyhedron R = HPolyhedron::whole_space(n);
    auto reduce = [&](const QVec& row) {
      QVec r = slice(row, 0, n);
      for (std::size_t j = 0; j < n; ++j) r[j] -= s * row[n + j];
      return r;
    };
    for (std::size_t i = 0; i < P.A.size(); ++i) R.add_inequality(reduce(P.A[i]), P.b[i] - dot(slice(P.A[i], n, n), y));
    for (std::size_t i = 0; i < P.E.size(); ++i) R.add_equality(reduce(P.E[i]), P.f[i] - dot(slice(P.E[i], n, n), y));
    if (is_empty(R)) continue;
    auto single = as_singleton(R);
    if (!single) {
      out.multivalued = true;
      if (auto x = relative_interior_point(R)) out.u.push_back(*x);
      continue;
    }
    if (std::find(out.u.begin(), out.u.end(), *single) == out.u.end()) out.u.push_back(*single);
  }
  if (out.u.size() > 1) out.multivalued = true;
  return out;
}

MintySolve solve_scalar_rational(const RationalFunction& t, const Rational& s, const QVec& y) {
  MintySolve out;
  out.y = y;
  const double yd = to_double(y[0]);
  const double sd = to_double(s);
  auto g = [&](double u) -> std::optional<double> {
    const double x[1] = {u};
    auto val = t.evaluate(std::span<const double>(x, 1));
    if (!val) return std::nullopt;
    return *val + sd * u - yd;
  };
  auto den = [&](double u) {
    const double x[1] = {u};
    return t.den.evaluate(std::span<const double>(x, 1));
  };
  const double R = 2 * (std::abs(yd) + 10) / std::max(sd, 1e-3) + 10;
  const int N = 4000;
  std::vector<double> roots;
  auto add_root = [&](double r) {
    for (double q : roots) {
      if (std::abs(q - r) <= 1e-9 * (1 + std::abs(r))) return;
    }
    roots.push_back(r);
  };
  double prev_u = -R;
  std::optional<double> prev_g = g(prev_u);
  for (int k = 1; k <= N; ++k) {
    const double u = -R + 2 * R * k / N;
    const std::optional<double> gu = g(u);
    if (gu && *gu == 0.0) add_root(u);
    if (prev_g && gu && (*prev_g < 0) != (*gu < 0) && *prev_g != 0.0 && den(prev_u) * den(u) > 0) {
      double a = prev_u, b = u;
      double ga = *prev_g;
      for (int it = 0; it < 200 && b - a > 1e-15 * (1 + std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        const auto gm = g(m);
        if (!gm) break;
        if ((*gm < 0) == (ga < 0)) {
          a = m;
          ga = *gm;
        } else {
          b = m;
        }
      }
      add_root(0.5 * (a + b));
    }
    prev_u = u;
    prev_g = gu;
  }
  for (double r : roots) out.u.push_back(QVec{rational_from_double(r)});
  out.multivalued = out.u.size() > 1;
  return out;
}

}  // namespace

MintyReport minty_surjectivity_test(const OperatorSpec& T, const Rational& s, const std::vector<QVec>& y_grid,
                                    double r_hat) {
  if (!(to_double(s) > r_hat)) {
    throw Error(ErrorKind::kShiftTooSmall, "shift s = " + s.get_str() + " must exceed r_hat = " + std::to_string(r_hat));
  }
  MintyReport rep;
  rep.s = s;
  rep.r_hat = r_hat;
  rep.bound = 1.0 / (to_double(s) - r_hat);
  rep.solves.resize(y_grid.size());
  if (is_compilable(T)) {
    const PieceList pieces = compile_to_polyhedral(T);
    parallel_for(y_grid.size(), [&](std::size_t k) { rep.solves[k] = solve_polyhedral(pieces, s, y_grid[k]); });
  } else if (const auto* m = std::get_if<RationalMapSpec>(&T.variant); m && T.dim == 1) {
    parallel_for(y_grid.size(), [&](std::size_t k) { rep.solves[k] = solve_scalar_rational(m->components[0], s, y_grid[k]); });
  } else {
    throw Error(ErrorKind::kUnsupportedVariant, "resolvent solve is not available for " + variant_name(T));
  }

  std::size_t solved = 0;
  std::vector<const MintySolve*> single;
  for (const auto& sv : rep.solves) {
    if (sv.u.empty()) continue;
    ++solved;
    if (sv.multivalued) {
      ++rep.multivalued;
    } else {
      single.push_back(&sv);
    }
  }
  rep.coverage = y_grid.empty() ? 0.0 : static_cast<double>(solved) / static_cast<double>(y_grid.size());
  for (std::size_t i = 0; i < single.size(); ++i) {
    for (std::size_t j = i + 1; j < single.size(); ++j) {
      const double du = norm2(sub(single[i]->u[0], single[j]->u[0]));
      const double dy = norm2(sub(single[i]->y, single[j]->y));
      if (dy == 0) continue;
      rep.max_ratio = std::max(rep.max_ratio, du / dy);
      if (du > dy * rep.bound * (1 + 1e-9)) rep.lipschitz_ok = false;
    }
  }
  return rep;
}

// --------------------------------------------------------- segment chains

WindowSupplier default_window_supplier(const OperatorSpec& T) {
  return [&T](const QVec& c) { return semilocal_hypomonotonicity(T, c); };
}

namespace {

QVec segment_point(const QVec& u1, const QVec& u2, const Rational& t) { return add(u1, scale(t, sub(u2, u1))); }

QVec central_value(const OperatorSpec& T, const QVec& u) {
  const ValueSet V = evaluate(T, u);
  if (!V.points.empty()) return V.points.front();
  const HPolyhedron& P = V.polyhedra.front();
  const VertexRayEnumeration e = enumerate_vertices_rays(P);
  if (e.vertices.size() > 1 && e.rays.empty() && e.lineality.empty()) {
    QVec c = zeros(P.dim);
    for (const auto& x : e.vertices) c = add(c, x);
    return scale(Rational(1, static_cast<long>(e.vertices.size())), c);
  }
  if (auto x = relative_interior_point(P)) return *x;
  throw Error(ErrorKind::kNotInDomain, to_string(u) + " has an empty value");
}

std::vector<Rational> dyadic_points(int depth) {
  std::vector<Rational> out;
  for (int level = 1; level <= depth; ++level) {
    const long den = 1L << level;
    for (long k = 1; k < den; k += 2) out.push_back(Rational(k, den));
  }
  return out;
}

}  // namespace

ChainCertificate segment_chain_monotonicity(const OperatorSpec& T, const QVec& u1, const QVec& u2,
                                            const WindowSupplier& windows, std::size_t max_links) {
  if (u1.size() != T.dim || u2.size() != T.dim) throw Error(ErrorKind::kDimensionMismatch, "segment endpoint length");
  for (const Rational& t : {Rational(0), Rational(1)}) {
    if (!in_domain(T, segment_point(u1, u2, t))) {
      throw Error(ErrorKind::kSegmentLeavesDomain, "segment leaves dom T at t=" + t.get_str());
    }
  }
  for (const Rational& t : dyadic_points(4)) {
    if (!in_domain(T, segment_point(u1, u2, t))) {
      throw Error(ErrorKind::kSegmentLeavesDomain, "segment leaves dom T at t=" + t.get_str());
    }
  }
  const QVec d = sub(u2, u1);
  Rational l1 = 0;
  for (const auto& x : d) l1 += abs(x);

  ChainCertificate cert;
  Rational t = 0;
  cert.ts.push_back(t);
  cert.points.push_back(u1);
  cert.values.push_back(central_value(T, u1));
  while (t < 1) {
    if (cert.ts.size() > max_links) {
      throw Error(ErrorKind::kWindowNotFound, "more than " + std::to_string(max_links) + " links needed");
    }
    const QVec here = segment_point(u1, u2, t);
    const auto win = windows(here);
    if (!win) throw Error(ErrorKind::kWindowNotFound, "no semilocal window at " + to_string(here));
    // |dt| * |d|_2 <= dt * |d|_1 <= radius keeps the next point in the closed ball.
    Rational next = sgn(l1) == 0 ? Rational(1) : t + win->radius / l1;
    if (next > 1) next = 1;
    const QVec p = segment_point(u1, u2, next);
    if (!in_domain(T, p)) throw Error(ErrorKind::kSegmentLeavesDomain, "segment leaves dom T at t=" + next.get_str());
    cert.ts.push_back(next);
    cert.points.push_back(p);
    cert.values.push_back(central_value(T, p));
    const Rational link = dot(sub(cert.values.back(), cert.values[cert.values.size() - 2]), d);
    if (sgn(link) < 0) cert.all_links_nonnegative = false;
    cert.link_products.push_back(link);
    cert.total += link;
    t = next;
  }
  return cert;
}

// ---------------------------------------------------------- domain probe

DomainProbeResult domain_convexity_probe(const OperatorSpec& T, const std::vector<QVec>& input, int depth) {
  std::vector<QVec> pts;
  for (const auto& p : input) {
    if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
  }
  if (pts.size() < 2) throw Error(ErrorKind::kTooFewSamples, "domain probe needs two distinct points");
  DomainProbeResult out;
  if (has_full_domain(T)) {
    out.checked = pts.size() * (pts.size() - 1) / 2;
    return out;
  }
  const std::vector<Rational> ts = dyadic_points(depth);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      for (const auto& t : ts) {
        const QVec x = segment_point(pts[i], pts[j], t);
        ++out.checked;
        if (!in_domain(T, x)) {
          out.passes = false;
          out.witness = x;
          out.pair = std::make_pair(pts[i], pts[j]);
          return out;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- verdict

std::string verdict_name(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kMaximalMonotone:
      return "MaximalMonotone";
    case VerdictKind::kStronglyMaximalMonotone:
      return "StronglyMaximalMonotone";
    case VerdictKind::kNotMonotone:
      return "NotMonotone";
    case VerdictKind::kNotHypomonotone:
      return "NotHypomonotone";
    case VerdictKind::kInconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

std::vector<QVec> thin_domain_points(const std::vector<GraphPoint>& samples, std::size_t cap) {
  std::vector<QVec> distinct;
  std::set<QVec> seen;
  for (const auto& p : samples) {
    if (seen.insert(p.u).second) distinct.push_back(p.u);
  }
  if (distinct.size() <= cap) return distinct;
  std::vector<QVec> out;
  for (std::size_t k = 0; k < cap; ++k) out.push_back(distinct[k * (distinct.size() - 1) / (cap - 1)]);
  return out;
}

// Dense local sample around u for confirming a PSD witness with a violating pair.
std::vector<GraphPoint> local_samples(const OperatorSpec& T, const QVec& u) {
  std::vector<GraphPoint> out;
  for (const Rational& delta : {Rational(1, 2), Rational(1, 10), Rational(1, 100)}) {
    SampleConfig cfg;
    cfg.lo = u;
    cfg.hi = u;
    for (std::size_t i = 0; i < T.dim; ++i) {
      cfg.lo[i] -= delta;
      cfg.hi[i] += delta;
    }
    cfg.density = T.dim == 1 ? 9 : 5;
    try {
      for (auto& p : graph_sample(T, cfg)) out.push_back(std::move(p));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kEmptySample) throw;
    }
  }
  return out;
}

}  // namespace

Verdict maximality_decision(const OperatorPtr& Tp, const DecisionConfig& cfg) {
  if (!Tp) throw Error(ErrorKind::kInvalidArgument, "no operator");
  const OperatorSpec& T = *Tp;
  Verdict out;
  out.kappa = cfg.kappa;

  std::optional<CoderivativeEngine> engine;
  std::vector<GraphPoint> samples;
  try {
    engine.emplace(Tp, cfg.schedule);
    samples = graph_sample(T, cfg.sample);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNotCompilable) throw Error(ErrorKind::kUnsupportedVariant, e.what());
    throw;
  }
  const QueryPlan plan = make_query_plan(*engine, cfg.sample, true);
  out.psd_regular = psd_coderivative_check(*engine, CoderivativeKind::kRegular, 0, plan);
  out.psd_limiting = psd_coderivative_check(*engine, CoderivativeKind::kLimiting, 0, plan);
  out.exact = out.psd_regular.exact && out.psd_limiting.exact;
  out.pairwise = pairwise_monotone_test(T, samples);
  out.hypo = hypomonotonicity_estimate(T, samples, cfg.close);

  // Route (d) legs: windows and domain convexity, reported for every operator with a restricted domain.
  const std::vector<QVec> domain_points = thin_domain_points(samples, cfg.max_domain_points);
  if (!has_full_domain(T) && domain_points.size() >= 2) {
    out.domain = domain_convexity_probe(T, domain_points);
    const std::vector<QVec> centers = {domain_points.front(), domain_points.back()};
    for (const auto& c : centers) {
      if (auto w = semilocal_hypomonotonicity(T, c, cfg.radii)) out.windows.push_back(*w);
    }
  }

  const bool psd_ok = out.psd_regular.passes() && out.psd_limiting.passes();
  if (!psd_ok) {
    if (!out.pairwise.monotone()) {
      out.kind = VerdictKind::kNotMonotone;
      out.witness_pair = out.pairwise.witness;
      out.reason = "coderivative PSD condition fails and a sampled pair violates monotonicity";
      return out;
    }
    const PSDReport& bad = out.psd_regular.passes() ? out.psd_limiting : out.psd_regular;
    const std::vector<GraphPoint> near = local_samples(T, bad.witness->point.u);
    if (near.size() >= 2) {
      const PairwiseReport local = pairwise_monotone_test(T, near);
      if (!local.monotone()) {
        out.kind = VerdictKind::kNotMonotone;
        out.witness_pair = local.witness;
        out.reason = "coderivative PSD condition fails; a violating pair was found near its witness";
        return out;
      }
    }
    out.kind = VerdictKind::kInconclusive;
    out.reason = "coderivative PSD condition fails (T is not maximal monotone) but no violating pair was found";
    return out;
  }

  if (out.hypo.divergent) {
    if (!out.pairwise.monotone()) {
      out.kind = VerdictKind::kNotMonotone;
      out.witness_pair = out.pairwise.witness;
      out.reason = "hypomonotonicity estimate diverges and a sampled pair violates monotonicity";
    } else {
      out.kind = VerdictKind::kNotHypomonotone;
      out.reason = "hypomonotonicity estimate diverges along the close-pair schedule";
    }
    return out;
  }

  if (!out.pairwise.monotone()) {
    out.kind = VerdictKind::kNotMonotone;
    out.witness_pair = out.pairwise.witness;
    out.reason = "a sampled pair violates monotonicity";
    if (out.domain && !out.domain->passes) {
      out.reason += "; route (d) also fails: the domain probe found " + to_string(*out.domain->witness) +
                    " outside dom T";
    }
    return out;
  }

  const bool smooth_map = std::holds_alternative<RationalMapSpec>(T.variant);
  if (!out.exact && !smooth_map) {
    out.kind = VerdictKind::kInconclusive;
    out.reason = "PSD evidence is sampled, so it cannot certify maximal monotonicity";
    return out;
  }
  if (!out.exact) out.qualifier = "certified-on-region";

  if (std::isfinite(out.hypo.r_hat)) {
    out.kind = VerdictKind::kMaximalMonotone;
    out.route = "global";
    out.reason = "PSD holds on every stratum and the hypomonotonicity modulus is finite";
  } else if (!out.windows.empty() && out.domain && out.domain->passes) {
    out.kind = VerdictKind::kMaximalMonotone;
    out.route = "semilocal-convex-domain";
    out.reason = "PSD holds, semilocal windows exist and the domain probe passes";
  } else {
    out.kind = VerdictKind::kInconclusive;
    out.reason = "neither the global nor the semilocal-convex-domain route applies";
    return out;
  }

  if (sgn(cfg.kappa) > 0) {
    PSDReport strong = psd_coderivative_check(*engine, CoderivativeKind::kRegular, cfg.kappa, plan);
    const PSDReport strong_lim = psd_coderivative_check(*engine, CoderivativeKind::kLimiting, cfg.kappa, plan);
    if (!strong_lim.passes() && strong.passes()) strong = strong_lim;
    out.psd_strong = strong;
    if (strong.passes() && strong_lim.passes()) {
      out.kind = VerdictKind::kStronglyMaximalMonotone;
      out.reason += "; the kappa threshold holds";
    } else {
      out.reason += "; the kappa threshold fails, so only plain maximal monotonicity is certified";
    }
  }

  if (cfg.run_minty) {
    try {
      const Rational s = cfg.shift_s ? *cfg.shift_s : default_shift(out.hypo.r_hat);
      out.minty = minty_surjectivity_test(T, s, default_y_grid(T.dim), out.hypo.r_hat);
      if (out.minty->coverage < 1.0 || out.minty->multivalued > 0 || !out.minty->lipschitz_ok) {
        out.kind = VerdictKind::kInconclusive;
        out.route.clear();
        out.reason = "resolvent cross-check failed: coverage, single-valuedness or the Lipschitz bound";
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kUnsupportedVariant) throw;
    }
  }
  return out;
}

}  // namespace monocone
