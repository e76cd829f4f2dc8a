#include <gtest/gtest.h>

#include <algorithm>

#include "cli/fixtures.hpp"
#include "monocone/error.hpp"
#include "monocone/operator_json.hpp"
#include "monocone/operator_model.hpp"
#include "monocone/polynomial.hpp"

namespace monocone {
namespace {

using cli::kx_box;

bool has_point(const std::vector<GraphPoint>& samples, const QVec& u, const QVec& v) {
  return std::any_of(samples.begin(), samples.end(), [&](const GraphPoint& p) { return p.u == u && p.v == v; });
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no exception";
  return ErrorKind::kInvalidArgument;
}

TEST(PolynomialTest, ParseAndEvaluate) {
  const RationalFunction r = parse_rational_function("-1/x", 1);
  EXPECT_EQ(r.evaluate(QVec{2}), Rational(-1, 2));
  EXPECT_FALSE(r.evaluate(QVec{0}).has_value());
  const RationalFunction d = r.derivative(0);
  EXPECT_EQ(d.evaluate(QVec{2}), Rational(1, 4));

  const RationalFunction p = parse_rational_function("x1^2 + 3*x1*x2 - x2", 2);
  EXPECT_EQ(p.evaluate(QVec{1, 2}), Rational(1 + 6 - 2));
  EXPECT_FALSE(p.is_affine());
  EXPECT_TRUE(parse_rational_function("2*x1 - x2/3 + 1", 2).is_affine());
  EXPECT_THROW(parse_rational_function("x +", 1), Error);
}

TEST(OperatorModelTest, AffineBoxValue) {
  const ValueSet V = evaluate(*kx_box(1), {2});
  EXPECT_TRUE(V.contains({2}));
  EXPECT_TRUE(V.contains({3}));
  EXPECT_TRUE(V.contains({Rational(5, 2)}));
  EXPECT_FALSE(V.contains({Rational(7, 2)}));
  EXPECT_FALSE(V.contains({Rational(3, 2)}));
}

TEST(OperatorModelTest, RationalMapOutsideDomain) {
  const OperatorPtr T = make_rational_map(1, {"-1/x"});
  EXPECT_TRUE(evaluate(*T, {0}).empty());
  EXPECT_FALSE(in_domain(*T, {0}));
  EXPECT_EQ(evaluate(*T, {2}).points, std::vector<QVec>{QVec{Rational(-1, 2)}});
  EXPECT_FALSE(has_full_domain(*T));
}

TEST(OperatorModelTest, InverseOfFlatBox) {
  const OperatorPtr inv = make_inverse(kx_box(0));
  const ValueSet V = evaluate(*inv, {Rational(1, 2)});
  for (int x : {-100, -1, 0, 7, 1000}) EXPECT_TRUE(V.contains({x}));
  EXPECT_TRUE(evaluate(*inv, {2}).empty());
}

TEST(OperatorModelTest, ShiftIdentityCoherence) {
  const OperatorPtr base = kx_box(1);
  const OperatorPtr shifted = make_shift_identity(base, 3);
  for (int k = -4; k <= 4; ++k) {
    const Rational u = ratio(k, 2);
    const ValueSet V = evaluate(*shifted, {u});
    for (const Rational& t : {Rational(0), Rational(1, 3), Rational(1)}) {
      const Rational v = u + t;
      EXPECT_TRUE(V.contains({v + 3 * u}));
    }
    EXPECT_FALSE(V.contains({u + 3 * u + 2}));
  }
}

TEST(OperatorModelTest, InverseCoherenceOnSamples) {
  const OperatorPtr T = cli::absval_subdiff();
  const OperatorPtr inv = make_inverse(T);
  const auto samples = graph_sample(*T, SampleConfig::box(1, -2, 2, 9, 1));
  for (const auto& p : samples) EXPECT_TRUE(evaluate(*inv, p.v).contains(p.u)) << to_string(p.u);
}

TEST(GraphSampleTest, BoxEndpointsAndMidpoint) {
  const auto samples = graph_sample(*kx_box(1), SampleConfig::box(1, -1, 1, 3, 1));
  EXPECT_TRUE(has_point(samples, {0}, {0}));
  EXPECT_TRUE(has_point(samples, {0}, {1}));
  EXPECT_TRUE(has_point(samples, {0}, {Rational(1, 2)}));
}

TEST(GraphSampleTest, SkipsPointsOutsideDomain) {
  const OperatorPtr T = make_rational_map(1, {"-1/x"});
  const auto samples = graph_sample(*T, SampleConfig::box(1, -1, 1, 9, 1));
  ASSERT_FALSE(samples.empty());
  for (const auto& p : samples) EXPECT_NE(p.u[0], 0);
}

TEST(GraphSampleTest, SegmentVerticesAndInterior) {
  const auto samples = graph_sample(*cli::absval_subdiff(), SampleConfig::box(1, -1, 1, 5, 1));
  EXPECT_TRUE(has_point(samples, {0}, {-1}));
  EXPECT_TRUE(has_point(samples, {0}, {1}));
  EXPECT_TRUE(has_point(samples, {0}, {0}));
}

TEST(GraphSampleTest, MembershipAndDeterminism) {
  const std::vector<OperatorPtr> ops{kx_box(2), cli::absval_subdiff(), make_rational_map(1, {"x^3 - x"}),
                                     cli::quad_plus_l1({{2, 0}, {0, 4}})};
  for (const auto& T : ops) {
    const SampleConfig cfg = SampleConfig::box(T->dim, -2, 2, 5, 42);
    const auto a = graph_sample(*T, cfg);
    const auto b = graph_sample(*T, cfg);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].u, b[i].u);
      EXPECT_EQ(a[i].v, b[i].v);
      EXPECT_TRUE(evaluate(*T, a[i].u).contains(a[i].v)) << variant_name(*T);
    }
  }
}

TEST(GraphSampleTest, RegionMissesDomain) {
  HPolyhedron far;
  far.dim = 2;
  far.add_inequality({-1, 0}, -5);
  far.add_equality({0, 1}, 0);
  const OperatorPtr T = make_polyhedral_graph(1, {far});
  EXPECT_EQ(kind_of([&] { graph_sample(*T, SampleConfig::box(1, -1, 1, 5, 1)); }), ErrorKind::kEmptySample);
}

TEST(CompileTest, AffineBoxIsOneStrip) {
  const PieceList pieces = compile_to_polyhedral(*kx_box(1));
  ASSERT_EQ(pieces.size(), 1u);
  EXPECT_TRUE(pieces[0].contains({0, 0}));
  EXPECT_TRUE(pieces[0].contains({0, 1}));
  EXPECT_TRUE(pieces[0].contains({5, 6}));
  EXPECT_FALSE(pieces[0].contains({0, 2}));
}

TEST(CompileTest, AbsvalHasThreePieces) {
  const PieceList pieces = compile_to_polyhedral(*cli::absval_subdiff());
  EXPECT_EQ(pieces.size(), 3u);
  auto in_union = [&](const QVec& x) {
    return std::any_of(pieces.begin(), pieces.end(), [&](const HPolyhedron& P) { return P.contains(x); });
  };
  EXPECT_TRUE(in_union({-3, -1}));
  EXPECT_TRUE(in_union({0, Rational(1, 3)}));
  EXPECT_TRUE(in_union({3, 1}));
  EXPECT_FALSE(in_union({1, 0}));
  EXPECT_FALSE(in_union({-1, 1}));
}

TEST(CompileTest, SharedQuadraticPart) {
  // f(x) = x^2/2 + |x|
  const MaxQuadFunction f = cli::quad_max(1, {cli::piece1(1, 1, 0), cli::piece1(1, -1, 0)});
  const OperatorPtr T = make_max_quad_subdiff(f);
  const PieceList pieces = compile_to_polyhedral(*T);
  auto in_union = [&](const QVec& x) {
    return std::any_of(pieces.begin(), pieces.end(), [&](const HPolyhedron& P) { return P.contains(x); });
  };
  EXPECT_TRUE(in_union({-2, -3}));
  EXPECT_TRUE(in_union({2, 3}));
  EXPECT_TRUE(in_union({0, Rational(-1, 2)}));
  EXPECT_FALSE(in_union({2, 2}));
}

TEST(CompileTest, RoundTripAgainstEvaluate) {
  const std::vector<OperatorPtr> ops{kx_box(1), cli::absval_subdiff(),
                                     make_max_quad_subdiff(cli::quad_max(1, {cli::piece1(2, 0, -1), cli::piece1(0, 0, 0)}))};
  for (const auto& T : ops) {
    const PieceList pieces = compile_to_polyhedral(*T);
    const OperatorPtr P = make_polyhedral_graph(1, pieces);
    for (int k = -40; k <= 40; ++k) {
      const QVec u{ratio(k, 10)};
      const ValueSet a = evaluate(*T, u);
      const ValueSet b = evaluate(*P, u);
      for (const QVec& v : representative_values(a)) EXPECT_TRUE(b.contains(v));
      for (const QVec& v : representative_values(b)) EXPECT_TRUE(a.contains(v));
    }
  }
}

TEST(CompileTest, DistinctQuadraticsInTwoDimensions) {
  MaxQuadFunction f;
  f.dim = 2;
  f.pieces.push_back({{{1, 0}, {0, 1}}, {0, 0}, 0});
  f.pieces.push_back({{{2, 0}, {0, 1}}, {1, 0}, 0});
  const OperatorPtr T = make_max_quad_subdiff(f);
  EXPECT_FALSE(is_compilable(*T));
  EXPECT_EQ(kind_of([&] { compile_to_polyhedral(*T); }), ErrorKind::kNotCompilable);
}

TEST(OperatorJsonTest, RoundTrip) {
  const std::vector<OperatorPtr> ops{kx_box(2), cli::absval_subdiff(), make_rational_map(1, {"-1/x"}),
                                     make_inverse(kx_box(1)), make_shift_identity(cli::absval_subdiff(), 1),
                                     make_shift_down(kx_box(3), Rational(1, 2))};
  for (const auto& T : ops) {
    const Json j = operator_to_json(*T);
    EXPECT_EQ(operator_to_json(*operator_from_json(j)), j);
  }
}

TEST(OperatorJsonTest, ReportsFieldOnError) {
  const Json bad = Json::parse(R"({"variant": "affine_box", "A": [["1", "2"]], "b": ["0"]})");
  try {
    operator_from_json(bad);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDimensionMismatch);
    EXPECT_NE(std::string(e.what()).find("'A[0]'"), std::string::npos) << e.what();
  }
  EXPECT_THROW(operator_from_json(Json::parse(R"({"variant": "nope", "dim": 1})")), Error);
  EXPECT_THROW(operator_from_json(Json::parse(R"({"variant": "affine_box", "dim": 1, "A": [["x"]]})")), Error);
}

}  // namespace
}  // namespace monocone
