// Acceptance checks AC1-AC8. Prints one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>

#include "cli/fixtures.hpp"
#include "monocone/coderivative.hpp"
#include "monocone/convexity.hpp"
#include "monocone/error.hpp"
#include "monocone/monotonicity.hpp"
#include "monocone/poly_cone.hpp"

namespace {

using namespace monocone;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (ok) detail.str("");
    ok = false;
    detail << why << "; ";
  }
  void require(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Rational product_of(const std::pair<GraphPoint, GraphPoint>& pair) {
  return dot(sub(pair.first.v, pair.second.v), sub(pair.first.u, pair.second.u));
}

double lambda_min(const QRows& Q) {
  Eigen::MatrixXd M(Q.size(), Q.size());
  for (std::size_t i = 0; i < Q.size(); ++i) {
    for (std::size_t j = 0; j < Q.size(); ++j) M(i, j) = to_double(Q[i][j]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  return es.eigenvalues().minCoeff();
}

// ------------------------------------------------------------------ AC1

// Hand-derived table for the strip 0 <= v - kappa u <= 1.
std::optional<Rational> strip_table(const Rational& kappa, const Rational& u, const Rational& v, const Rational& w) {
  const Rational g = v - kappa * u;
  if (g > 0 && g < 1) {
    if (sgn(w) == 0) return Rational(0);
    return std::nullopt;
  }
  if (sgn(g) == 0 && sgn(w) >= 0) return Rational(kappa * w);
  if (g == 1 && sgn(w) <= 0) return Rational(kappa * w);
  return std::nullopt;
}

void ac1(Outcome& out) {
  const auto t0 = Clock::now();
  int probes = 0;
  for (const Rational& kappa : {Rational(0), Rational(1), Rational(2)}) {
    const CoderivativeEngine engine(cli::kx_box(kappa));
    // (u, v - kappa u, w): interior, lower edge, upper edge.
    const std::vector<std::tuple<Rational, Rational, Rational>> cases = {
        {0, ratio(1, 2), 0}, {1, ratio(1, 3), 1}, {-1, ratio(2, 3), -1}, {2, ratio(1, 2), ratio(1, 2)},
        {0, 0, 1},           {3, 0, 0},           {-2, 0, -1},           {1, 0, 2},
        {0, 1, -1},          {-1, 1, 0},          {2, 1, 1},             {ratio(1, 2), 1, -2},
    };
    for (const auto& [u, offset, w] : cases) {
      const Rational v = kappa * u + offset;
      const std::optional<Rational> expected = strip_table(kappa, u, v, w);
      for (const auto kind : {CoderivativeKind::kRegular, CoderivativeKind::kLimiting}) {
        const CoderivativeValue value = engine.compute(kind, {u}, {v}, {w});
        const bool match = expected ? value.polyhedra.empty() && value.points.size() == 1 &&
                                          value.points[0] == QVec{*expected}
                                    : value.empty();
        if (!match) {
          out.fail("kappa=" + kappa.get_str() + " (u,v,w)=(" + u.get_str() + "," + v.get_str() + "," + w.get_str() +
                   ") " + std::string(kind_name(kind)) + " gave " + value.to_string());
        }
      }
      ++probes;
    }
  }
  const double secs = seconds_since(t0);
  out.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  if (out.ok) out.detail << probes << " probes x 2 kinds exact, " << secs << " s";
}

// ------------------------------------------------------------------ AC2

void ac2(Outcome& out) {
  const OperatorPtr T = cli::kx_box(1);
  const CoderivativeEngine engine(T);
  const SampleConfig cfg = SampleConfig::box(1, -2, 2, 9);
  const QueryPlan plan = make_query_plan(engine, cfg, true);
  const PSDReport reg = psd_coderivative_check(engine, CoderivativeKind::kRegular, 0, plan);
  const PSDReport lim = psd_coderivative_check(engine, CoderivativeKind::kLimiting, 0, plan);
  out.require(reg.passes() && reg.exact && lim.passes() && lim.exact, "PSD checks not an exact pass");

  const std::vector<GraphPoint> samples = graph_sample(*T, cfg);
  const HypomonotonicityReport hypo = hypomonotonicity_estimate(*T, samples);
  out.require(hypo.divergent, "estimate did not diverge");
  double q3 = 0;
  for (const auto& l : hypo.levels) {
    if (l.distance == ratio(1, 1000)) q3 = l.min_quotient;
  }
  out.require(q3 <= -999, "quotient at 1e-3 is " + std::to_string(q3));

  const PairwiseReport pw = pairwise_monotone_test(*T, samples);
  out.require(!pw.monotone() && pw.witness.has_value(), "no pairwise witness");
  if (pw.witness) out.require(sgn(product_of(*pw.witness)) < 0, "witness product not negative");

  DecisionConfig dc;
  dc.sample = cfg;
  const Verdict v = maximality_decision(T, dc);
  out.require(v.kind == VerdictKind::kNotMonotone, "verdict " + verdict_name(v.kind));
  if (out.ok) {
    out.detail << "PSD exact pass over " << reg.strata << " strata, quotient " << q3 << " at 1e-3, witness product "
               << pw.witness_product.get_str() << ", verdict " << verdict_name(v.kind);
  }
}

// ------------------------------------------------------------------ AC3

void ac3(Outcome& out) {
  const OperatorPtr T = cli::find_fixture("inv-neg")->op;
  const CoderivativeEngine engine(T);

  // z = w / u^2 at 100 probes.
  int probes = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 50 && probes < 100; ++i) {
    for (int sign : {1, -1}) {
      const Rational u = sign * ratio(i, 10);
      const Rational w = i % 3 == 0 ? Rational(-1) : ratio(i % 7 + 1, 3);
      const CoderivativeValue value = engine.regular({u}, {-1 / u}, {w});
      const Rational expected = w / (u * u);
      if (!(value.points.size() == 1 && value.points[0][0] == expected)) {
        out.fail("value at u=" + u.get_str() + " is " + value.to_string());
        continue;
      }
      worst = std::min(worst, to_double(value.points[0][0] * w));
      ++probes;
    }
  }
  out.require(probes == 100 && worst >= -1e-12, "PSD probes failed");

  for (const Rational& c : {Rational(-1), Rational(1)}) {
    const auto win = semilocal_hypomonotonicity(*T, {c});
    out.require(win.has_value() && win->r == 0.0, "no monotone window at " + c.get_str());
  }

  const SampleConfig ends = SampleConfig::box(1, -1, 1, 2);
  const std::vector<GraphPoint> samples = graph_sample(*T, ends);
  const DomainProbeResult probe = domain_convexity_probe(*T, {QVec{-1}, QVec{1}});
  out.require(!probe.passes && probe.witness == QVec{0}, "domain probe did not report 0");

  const PairwiseReport pw = pairwise_monotone_test(*T, samples);
  out.require(pw.witness && pw.witness_product == -4, "pairwise product is not -4");
  if (pw.witness) {
    const auto& [a, b] = *pw.witness;
    const bool ends_ok = (a.u == QVec{-1} && a.v == QVec{1} && b.u == QVec{1} && b.v == QVec{-1}) ||
                         (b.u == QVec{-1} && b.v == QVec{1} && a.u == QVec{1} && a.v == QVec{-1});
    out.require(ends_ok, "witness pair is not (-1,1),(1,-1)");
  }

  bool leaves = false;
  try {
    segment_chain_monotonicity(*T, {-1}, {1}, default_window_supplier(*T));
  } catch (const Error& e) {
    leaves = e.kind() == ErrorKind::kSegmentLeavesDomain;
  }
  out.require(leaves, "segment chain did not leave the domain");

  DecisionConfig dc;
  dc.sample = SampleConfig::box(1, -1, 1, 9);
  const Verdict v = maximality_decision(T, dc);
  out.require(v.kind == VerdictKind::kInconclusive || v.kind == VerdictKind::kNotMonotone,
              "verdict " + verdict_name(v.kind));
  if (out.ok) {
    out.detail << probes << " PSD probes exact (min <z,w> = " << worst << "), windows r=0 at +-1, probe witness 0, "
               << "pair product -4, verdict " << verdict_name(v.kind);
  }
}

// ------------------------------------------------------------------ AC4

void check_positive(Outcome& out, const std::string& name, const OperatorPtr& T,
                    const std::function<Rational(const Rational&)>& resolvent) {
  DecisionConfig dc;
  dc.sample = SampleConfig::box(1, -2, 2, 9);
  dc.shift_s = Rational(1);
  const Verdict v = maximality_decision(T, dc);
  out.require(v.kind == VerdictKind::kMaximalMonotone && v.route == "global", name + ": verdict " + verdict_name(v.kind));
  out.require(v.exact && v.psd_regular.exhaustive && v.psd_limiting.exhaustive, name + ": PSD not exact/exhaustive");
  out.require(v.hypo.r_hat == 0.0, name + ": r_hat = " + std::to_string(v.hypo.r_hat));

  const std::vector<QVec> grid = default_y_grid(1);
  const MintyReport m = minty_surjectivity_test(*T, 1, grid, v.hypo.r_hat);
  out.require(grid.size() == 21 && m.coverage == 1.0 && m.multivalued == 0, name + ": Minty coverage");
  out.require(m.max_ratio <= 1.0 / (1.0 - v.hypo.r_hat) + 1e-9, name + ": Lipschitz ratio " + std::to_string(m.max_ratio));
  double err = 0;
  for (const auto& s : m.solves) {
    if (s.u.size() != 1) continue;
    err = std::max(err, std::abs(to_double(s.u[0][0]) - to_double(resolvent(s.y[0]))));
  }
  out.require(err <= 1e-10, name + ": resolvent error " + std::to_string(err));
  if (out.ok) out.detail << name << " MaximalMonotone (r_hat 0, ratio " << m.max_ratio << ", err " << err << "); ";
}

void ac4(Outcome& out) {
  check_positive(out, "subdiff |x|", cli::absval_subdiff(), [](const Rational& y) {
    if (y > 1) return Rational(y - 1);
    if (y < -1) return Rational(y + 1);
    return Rational(0);
  });
  // T(x) = x/2 - 1 as a box with lo = hi = 0; the resolvent solves x/2 - 1 + x = y.
  const OperatorPtr affine = make_affine_box({{ratio(1, 2)}}, {Rational(-1)}, {Rational(0)}, {Rational(0)});
  check_positive(out, "affine", affine, [](const Rational& y) { return Rational((y + 1) * 2 / 3); });
}

// ------------------------------------------------------------------ AC5

void ac5(Outcome& out) {
  const QRows Q{{2, 0}, {0, 4}};
  const double lmin = lambda_min(Q);
  const CoderivativeEngine engine(cli::quad_plus_l1(Q));
  const QueryPlan plan = make_query_plan(engine, SampleConfig::box(2, -2, 2, 5), true);
  std::vector<Rational> kappas{0, ratio(1, 2), 1, ratio(3, 2), 2, Rational(2) + ratio(1, 1000000)};
  for (const auto& kappa : kappas) {
    const PSDReport reg = psd_coderivative_check(engine, CoderivativeKind::kRegular, kappa, plan);
    const PSDReport lim = psd_coderivative_check(engine, CoderivativeKind::kLimiting, kappa, plan);
    const bool pass = reg.passes() && lim.passes();
    const bool oracle = to_double(kappa) <= lmin + 1e-12;
    out.require(reg.exact && lim.exact, "kappa=" + kappa.get_str() + " not exact");
    out.require(pass == oracle, "kappa=" + kappa.get_str() + " disagrees with lambda_min");
    if (!pass && reg.witness) {
      const PSDWitness& w = *reg.witness;
      const CoderivativeValue val = engine.regular(w.point.u, w.point.v, w.w);
      out.require(val.contains(w.z) && dot(w.z, w.w) < kappa * squared_norm(w.w), "witness not re-checkable");
    }
  }
  if (out.ok) out.detail << "threshold passes for kappa <= 2, fails at 2 + 1e-6; lambda_min(Q) = " << lmin;
}

// ------------------------------------------------------------------ AC6

void ac6(Outcome& out) {
  int agree = 0, convex = 0;
  for (const auto& item : cli::function_catalog()) {
    const ConvexityVerdict v = convexity_check_second_order(item.f, ConvexityConfig::standard(item.f.dim));
    const OracleResult oracle = convexity_oracle_sampling(item.f, 1000, 7);
    const bool positive = v.kind == ConvexityKind::kConvex;
    if (positive) ++convex;
    if (positive != oracle.passes || positive != item.convex) {
      out.fail(item.name + ": " + convexity_kind_name(v.kind) + " vs oracle " + (oracle.passes ? "pass" : "witness"));
      continue;
    }
    if (!positive) {
      if (v.kind != ConvexityKind::kNotConvex || !v.second_order) {
        out.fail(item.name + ": no second-order witness");
        continue;
      }
      const PSDWitness& w = *v.second_order;
      const CoderivativeEngine engine(make_max_quad_subdiff(item.f));
      const CoderivativeValue val = engine.limiting(w.point.u, w.point.v, w.w);
      if (!(val.contains(w.z) && sgn(dot(w.z, w.w)) < 0)) {
        out.fail(item.name + ": witness not re-checkable");
        continue;
      }
    }
    ++agree;
  }
  const std::size_t total = cli::function_catalog().size();
  out.require(total == 20 && convex == 10, "catalog shape");
  if (out.ok) out.detail << agree << "/" << total << " agree with the midpoint oracle (1000 triples each)";
}

// ------------------------------------------------------------------ AC7

void ac7(Outcome& out) {
  std::vector<Rational> grid;
  for (int k = 0; k <= 8; ++k) grid.push_back(ratio(k, 2));
  const MaxQuadFunction quad = cli::quad_max(2, {{{{2, 0}, {0, 4}}, {0, 0}, 0}});
  const ModulusEstimate est = strong_modulus_estimate(quad, grid, ConvexityConfig::standard(2));
  out.require(est.kappa_star && *est.kappa_star == 2, "kappa* for diag(2,4)");
  out.require(std::abs(lambda_min(quad.pieces[0].Q) - 2.0) < 1e-12, "lambda_min oracle");

  const MaxQuadFunction absx = cli::function_catalog().front().f;
  std::vector<Rational> positive(grid.begin() + 1, grid.end());
  positive.push_back(ratio(1, 1000));
  const ModulusEstimate abs_est = strong_modulus_estimate(absx, positive, ConvexityConfig::standard(1));
  out.require(!abs_est.kappa_star, "|x| passed some kappa > 0");
  // Defining inequality at x = 1, y = 2, lambda = 1/2 with kappa = 1/2.
  out.require(sgn(midpoint_gap(absx, {1}, {2}, ratio(1, 2), ratio(1, 2))) > 0, "|x| primal cross-check");
  if (out.ok) out.detail << "kappa* = 2 for diag(2,4) with both routes agreeing; |x| fails all " << positive.size()
                         << " positive kappa";
}

// ------------------------------------------------------------------ AC8

struct FixtureOp {
  std::string name;
  OperatorPtr op;
};

std::vector<FixtureOp> all_fixture_ops() {
  std::vector<FixtureOp> ops;
  for (const auto& fx : cli::fixture_catalog()) {
    if (fx.kind == cli::FixtureKind::kMaximal) {
      ops.push_back({fx.name, fx.op});
    } else {
      ops.push_back({fx.name, make_max_quad_subdiff(*fx.function)});
    }
  }
  return ops;
}

PolyCone swap_cone(const PolyCone& K, std::size_t n) {
  auto swap = [n](const QVec& g) { return concat(slice(g, n, n), slice(g, 0, n)); };
  std::vector<QVec> rays, lin;
  for (const auto& r : K.rays()) rays.push_back(swap(r));
  for (const auto& l : K.lineality()) lin.push_back(swap(l));
  return PolyCone::from_generators(2 * n, rays, lin);
}

void ac8(Outcome& out) {
  const auto t0 = Clock::now();
  const std::vector<FixtureOp> ops = all_fixture_ops();
  std::mt19937_64 rng(11);

  // Regular within limiting at 1000 graph points.
  std::size_t inclusions = 0;
  const std::size_t per_op = (1000 + ops.size() - 1) / ops.size();
  for (const auto& [name, T] : ops) {
    const CoderivativeEngine engine(T);
    const std::vector<GraphPoint> pts = graph_sample(*T, SampleConfig::box(T->dim, -2, 2, T->dim == 1 ? 9 : 5));
    const std::vector<QVec> dirs = unit_directions(T->dim);
    for (std::size_t k = 0; k < per_op; ++k) {
      const GraphPoint& p = pts[rng() % pts.size()];
      const QVec& w = dirs[rng() % dirs.size()];
      const CoderivativeValue reg = engine.regular(p.u, p.v, w);
      const CoderivativeValue lim = engine.limiting(p.u, p.v, w);
      if (!value_subset(reg, lim)) out.fail(name + ": regular not within limiting at " + to_string(p.u));
      ++inclusions;
    }
  }

  // Graph swap on polyhedral fixtures.
  std::size_t swaps = 0;
  for (const auto& [name, T] : ops) {
    if (!is_compilable(*T)) continue;
    const std::size_t n = T->dim;
    const CoderivativeEngine engine(T);
    const CoderivativeEngine inverse(make_inverse(T));
    for (const auto& p : graph_sample(*T, SampleConfig::box(n, -2, 2, n == 1 ? 9 : 3))) {
      if (!cone_equal(inverse.regular_cone(p.v, p.u), swap_cone(engine.regular_cone(p.u, p.v), n))) {
        out.fail(name + ": swap symmetry at " + to_string(p.u));
      }
      ++swaps;
    }
  }

  // Shift rule against the ShiftIdentity variant at 100 queries per fixture.
  std::size_t shifts = 0;
  for (const auto& [name, T] : ops) {
    const std::size_t n = T->dim;
    const std::vector<GraphPoint> pts = graph_sample(*T, SampleConfig::box(n, -2, 2, n == 1 ? 9 : 5));
    const std::vector<QVec> dirs = unit_directions(n);
    const std::vector<Rational> shifts_s{ratio(1, 2), 1, 2};
    std::vector<CoderivativeEngine> shifted;
    for (const auto& s : shifts_s) shifted.emplace_back(make_shift_identity(T, s));
    for (int k = 0; k < 100; ++k) {
      const std::size_t si = rng() % shifts_s.size();
      const Rational& s = shifts_s[si];
      const GraphPoint& p = pts[rng() % pts.size()];
      const QVec& w = dirs[rng() % dirs.size()];
      const auto kind = k % 2 == 0 ? CoderivativeKind::kRegular : CoderivativeKind::kLimiting;
      const QVec v2 = add(p.v, scale(s, p.u));
      const CoderivativeValue rule = coderivative_shift(T, s, p.u, v2, w, kind);
      const CoderivativeValue direct = shifted[si].compute(kind, p.u, v2, w);
      if (!values_equal(rule, direct)) out.fail(name + ": shift rule at " + to_string(p.u));
      ++shifts;
    }
  }

  // Smooth maps against central differences.
  std::size_t smooth = 0;
  double worst_rel = 0;
  const std::vector<OperatorPtr> maps{make_rational_map(1, {"-1/x"}), make_rational_map(1, {"x^3/3 + x"}),
                                      make_rational_map(2, {"x1^2 + x2", "x1*x2 - 1/(1 + x2^2)"})};
  for (const auto& T : maps) {
    const auto& m = std::get<RationalMapSpec>(T->variant);
    const std::size_t n = T->dim;
    const CoderivativeEngine engine(T);
    std::uniform_real_distribution<double> coord(0.3, 2.0);
    for (int k = 0; k < 20; ++k) {
      QVec u(n);
      for (auto& x : u) x = rational_from_double(std::round(coord(rng) * 64) / 64);
      const QVec v = evaluate(*T, u).points.at(0);
      for (const auto& w : unit_directions(n)) {
        const CoderivativeValue val = engine.regular(u, v, w);
        const std::vector<double> ud = to_doubles(u);
        const double h = 1e-5;
        for (std::size_t j = 0; j < n; ++j) {
          // (J' w)_j = sum_i w_i dT_i/du_j
          std::vector<double> up = ud, dn = ud;
          up[j] += h;
          dn[j] -= h;
          double fd = 0;
          for (std::size_t i = 0; i < n; ++i) {
            fd += to_double(w[i]) * (*m.components[i].evaluate(std::span<const double>(up)) -
                                     *m.components[i].evaluate(std::span<const double>(dn))) / (2 * h);
          }
          const double exact = to_double(val.points.at(0)[j]);
          const double rel = std::abs(exact - fd) / std::max(1.0, std::abs(exact));
          worst_rel = std::max(worst_rel, rel);
          if (rel > 1e-6) out.fail("finite difference mismatch " + std::to_string(rel));
        }
        ++smooth;
      }
    }
  }

  // Polar involution.
  std::size_t polars = 0;
  {
    const PolyCone C = PolyCone::from_generators(2, {{1, 2}});
    out.require(cone_equal(cone_polar(cone_polar(C)), C), "polar involution for cone{(1,2)}");
    ++polars;
    std::uniform_int_distribution<int> entry(-3, 3);
    for (int k = 0; k < 40; ++k) {
      const std::size_t d = 2 + k % 3;
      std::vector<QVec> gens(1 + k % 4, QVec(d));
      for (auto& g : gens) {
        for (auto& x : g) x = entry(rng);
      }
      const PolyCone K = PolyCone::from_generators(d, gens);
      if (!cone_equal(cone_polar(cone_polar(K)), K)) out.fail("polar involution on a random cone");
      ++polars;
    }
  }

  // Mean-value inequality, 100 draws per catalog function.
  std::size_t mvi = 0;
  std::uniform_real_distribution<double> pos(-3, 3), eps(0.01, 0.5);
  for (const auto& item : cli::function_catalog()) {
    for (int k = 0; k < 100; ++k) {
      std::vector<double> a(item.f.dim), b(item.f.dim);
      for (auto& x : a) x = pos(rng);
      for (auto& x : b) x = pos(rng);
      const MeanValueReport rep = mean_value_inequality_test(item.f, a, b, eps(rng), item.f.dim == 1 ? 41 : 15);
      if (!rep.passes) out.fail(item.name + ": mean-value inequality");
      ++mvi;
    }
  }
  const double secs = seconds_since(t0);
  if (out.ok) {
    out.detail << inclusions << " inclusions, " << swaps << " swap checks, " << shifts << " shift-rule checks, "
               << smooth << " smooth checks (worst rel " << worst_rel << "), " << polars << " polar involutions, "
               << mvi << " mean-value draws, " << secs << " s";
  }
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"AC1 coderivative table for kappa x + [0,1]", ac1},
      {"AC2 hypomonotonicity is essential", ac2},
      {"AC3 domain convexity is essential", ac3},
      {"AC4 positive certification with resolvent cross-check", ac4},
      {"AC5 strong monotonicity threshold vs lambda_min", ac5},
      {"AC6 convexity equivalence on the 20-function catalog", ac6},
      {"AC7 strong convexity modulus", ac7},
      {"AC8 structural invariants", ac8},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome out;
    try {
      run(out);
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    if (!out.ok) ++failures;
    std::cout << (out.ok ? "PASS " : "FAIL ") << name << ": " << out.detail.str() << std::endl;
  }
  const double secs = seconds_since(t0);
  std::cout << "total " << secs << " s" << std::endl;
  return failures == 0 ? 0 : 1;
}
