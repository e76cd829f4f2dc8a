#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <random>

#include "cli/fixtures.hpp"
#include "monocone/convexity.hpp"
#include "monocone/error.hpp"

namespace monocone {
namespace {

using cli::piece1;
using cli::quad_max;

MaxQuadFunction absval() { return quad_max(1, {piece1(0, 1, 0), piece1(0, -1, 0)}); }
MaxQuadFunction square() { return quad_max(1, {piece1(2, 0, 0)}); }
MaxQuadFunction neg_square() { return quad_max(1, {piece1(-2, 0, 0)}); }

MaxQuadFunction diag24() {
  MaxQuadFunction f;
  f.dim = 2;
  f.pieces.push_back({{{2, 0}, {0, 4}}, {0, 0}, 0});
  return f;
}

double lambda_min(const QRows& Q) {
  Eigen::Matrix2d M;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) M(i, j) = to_double(Q[i][j]);
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(M).eigenvalues().minCoeff();
}

TEST(SubdifferentialTest, AbsvalAtKink) {
  const Subgradients s = subdifferential(absval(), QVec{0});
  EXPECT_EQ(s.generators.size(), 2u);
  for (const Rational& v : {Rational(-1), Rational(-1, 3), Rational(0), Rational(1)}) EXPECT_TRUE(s.contains({v}));
  EXPECT_FALSE(s.contains({Rational(3, 2)}));
  EXPECT_DOUBLE_EQ(s.max_norm(), 1.0);
}

TEST(SubdifferentialTest, TangentPieces) {
  const MaxQuadFunction f = quad_max(1, {piece1(2, 0, 0), piece1(0, 2, -1)});
  const Subgradients s = subdifferential(f, QVec{1});
  EXPECT_EQ(f.active_pieces(QVec{1}).size(), 2u);
  EXPECT_TRUE(s.contains({2}));
  EXPECT_FALSE(s.contains({Rational(19, 10)}));
}

TEST(SubdifferentialTest, SmoothSquare) {
  for (int k = -3; k <= 3; ++k) {
    const Subgradients s = subdifferential(square(), QVec{k});
    EXPECT_TRUE(s.contains({2 * k}));
    EXPECT_FALSE(s.contains({2 * k + 1}));
  }
  const auto approx = subdifferential(absval(), std::vector<double>{1e-12});
  EXPECT_EQ(approx.size(), 2u);
}

TEST(SecondOrderConvexityTest, Absval) {
  const ConvexityVerdict v = convexity_check_second_order(absval(), ConvexityConfig::standard(1));
  EXPECT_EQ(v.kind, ConvexityKind::kConvex);
  EXPECT_TRUE(v.exact);
}

TEST(SecondOrderConvexityTest, ConcaveSquare) {
  const ConvexityVerdict v = convexity_check_second_order(neg_square(), ConvexityConfig::standard(1));
  EXPECT_EQ(v.kind, ConvexityKind::kNotConvex);
  ASSERT_TRUE(v.second_order.has_value());
  const PSDWitness& w = *v.second_order;
  EXPECT_EQ(w.z, scale(-2, w.w));
  EXPECT_LT(dot(w.z, w.w), 0);
  ASSERT_TRUE(v.primal.has_value());
  EXPECT_GT(v.primal->gap, 0);
  EXPECT_EQ(midpoint_gap(neg_square(), v.primal->x, v.primal->y, v.primal->lambda, 0), v.primal->gap);
  EXPECT_FALSE(v.primal_missing);
}

TEST(SecondOrderConvexityTest, ClippedSquare) {
  const MaxQuadFunction f = quad_max(1, {piece1(2, 0, -1), piece1(0, 0, 0)});
  const ConvexityVerdict v = convexity_check_second_order(f, ConvexityConfig::standard(1));
  EXPECT_EQ(v.kind, ConvexityKind::kConvex);
  EXPECT_TRUE(v.exact);
  EXPECT_TRUE(convexity_oracle_sampling(f, 1000, 3).passes);
}

TEST(SecondOrderConvexityTest, LimitingContainsCombined) {
  for (const auto& entry : cli::function_catalog()) {
    if (entry.f.dim != 1) continue;
    const OperatorPtr T = make_max_quad_subdiff(entry.f);
    const auto samples = graph_sample(*T, SampleConfig::box(1, -2, 2, 9, 1));
    for (const auto& p : samples) {
      for (int w : {-1, 1}) {
        EXPECT_TRUE(value_subset(second_order_combined(entry.f, p.u, p.v, {w}),
                                 second_order_limiting(entry.f, p.u, p.v, {w})))
            << entry.name;
      }
    }
  }
}

TEST(SecondOrderConvexityTest, SmoothReductionMatchesEigenvalues) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> entry(-6, 6);
  for (int trial = 0; trial < 30; ++trial) {
    const Rational a = ratio(entry(rng), 2);
    const Rational b = ratio(entry(rng), 2);
    const Rational c = ratio(entry(rng), 2);
    MaxQuadFunction f;
    f.dim = 2;
    f.pieces.push_back({{{a, b}, {b, c}}, {1, -1}, 0});
    const QVec u{1, 2};
    const QVec v = f.piece_gradient(0, u);
    const QVec w{Rational(3, 5), Rational(4, 5)};
    EXPECT_EQ(second_order_combined(f, u, v, w).points, std::vector<QVec>{mat_vec(f.pieces[0].Q, w)});
    ConvexityConfig cfg = ConvexityConfig::standard(2);
    cfg.max_points = 12;
    const ConvexityVerdict verdict = convexity_check_second_order(f, cfg);
    EXPECT_EQ(verdict.kind == ConvexityKind::kConvex, lambda_min(f.pieces[0].Q) >= -1e-12)
        << to_string(a) << " " << to_string(b) << " " << to_string(c);
  }
}

TEST(StrongConvexityTest, DiagonalModulus) {
  std::vector<Rational> grid;
  for (int k = 0; k <= 8; ++k) grid.push_back(ratio(k, 2));
  ConvexityConfig cfg = ConvexityConfig::standard(2);
  cfg.max_points = 20;
  const ModulusEstimate m = strong_modulus_estimate(diag24(), grid, cfg);
  ASSERT_TRUE(m.kappa_star.has_value());
  EXPECT_EQ(*m.kappa_star, Rational(2));
}

TEST(StrongConvexityTest, AbsvalHasNoModulus) {
  for (const Rational& kappa : {ratio(1, 1000), ratio(1, 2), Rational(2)}) {
    const ConvexityVerdict v = strong_convexity_check(absval(), kappa, ConvexityConfig::standard(1));
    EXPECT_EQ(v.kind, ConvexityKind::kNotStronglyConvex);
  }
  // x = 1, y = 2, lambda = 1/2 violates the defining inequality for every kappa > 0.
  EXPECT_GT(midpoint_gap(absval(), {1}, {2}, ratio(1, 2), ratio(1, 1000)), 0);
}

TEST(StrongConvexityTest, SquareEqualityCase) {
  const ConvexityVerdict v = strong_convexity_check(square(), 2, ConvexityConfig::standard(1));
  EXPECT_EQ(v.kind, ConvexityKind::kStronglyConvex);
  EXPECT_EQ(v.combined.worst_margin, 0.0);
  EXPECT_EQ(strong_convexity_check(square(), ratio(201, 100), ConvexityConfig::standard(1)).kind,
            ConvexityKind::kNotStronglyConvex);
}

TEST(StrongConvexityTest, ShiftedFunction) {
  const MaxQuadFunction g = shifted_function(diag24(), 2);
  EXPECT_EQ(g.pieces[0].Q, (QRows{{0, 0}, {0, 2}}));
  EXPECT_EQ(g.value(QVec{1, 1}), diag24().value(QVec{1, 1}) - 2);
}

TEST(OracleTest, KnownFunctions) {
  EXPECT_TRUE(convexity_oracle_sampling(absval(), 500, 1).passes);
  EXPECT_TRUE(convexity_oracle_sampling(absval(), 500, 99).passes);

  const OracleResult concave = convexity_oracle_sampling(neg_square(), 500, 1);
  EXPECT_FALSE(concave.passes);
  ASSERT_TRUE(concave.witness.has_value());
  EXPECT_GT(midpoint_gap(neg_square(), concave.witness->x, concave.witness->y, concave.witness->lambda, 0), 0);
  EXPECT_EQ(midpoint_gap(neg_square(), {-1}, {1}, ratio(1, 2), 0), Rational(1));

  const OracleResult eq = convexity_oracle_sampling(square(), 500, 1, 2);
  EXPECT_TRUE(eq.passes);
  EXPECT_NEAR(eq.min_margin, 0.0, 1e-12);
}

TEST(MeanValueTest, KnownSegments) {
  const MeanValueReport abs = mean_value_inequality_test(absval(), {-1}, {1}, 0.1);
  EXPECT_TRUE(abs.passes);
  EXPECT_EQ(abs.lhs, 0.0);
  EXPECT_DOUBLE_EQ(abs.segment_length, 2.0);
  EXPECT_DOUBLE_EQ(abs.grid_sup, 1.0);

  const MeanValueReport sq = mean_value_inequality_test(square(), {0}, {2}, 0.1);
  EXPECT_TRUE(sq.passes);
  EXPECT_DOUBLE_EQ(sq.lhs, 4.0);
  EXPECT_NEAR(sq.grid_sup, 4.2, 1e-12);
  EXPECT_GE(sq.bound, 4.2);

  const MaxQuadFunction tent = quad_max(1, {piece1(0, 1, 0), piece1(0, -1, 1)});
  const MeanValueReport t = mean_value_inequality_test(tent, {0}, {1}, 0.1);
  EXPECT_TRUE(t.passes);
  EXPECT_EQ(t.lhs, 0.0);
}

TEST(MeanValueTest, RandomSegments) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coord(-3, 3);
  for (const auto& entry : cli::function_catalog()) {
    for (int k = 0; k < 5; ++k) {
      std::vector<double> a(entry.f.dim), b(entry.f.dim);
      for (auto& x : a) x = coord(rng);
      for (auto& x : b) x = coord(rng);
      EXPECT_TRUE(mean_value_inequality_test(entry.f, a, b, 0.05).passes) << entry.name;
    }
  }
}

}  // namespace
}  // namespace monocone
