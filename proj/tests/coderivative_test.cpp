#include <gtest/gtest.h>

#include <cmath>

#include "cli/fixtures.hpp"
#include "monocone/coderivative.hpp"
#include "monocone/error.hpp"

namespace monocone {
namespace {

using cli::absval_subdiff;
using cli::kx_box;

const CoderivativeKind kKinds[] = {CoderivativeKind::kRegular, CoderivativeKind::kLimiting};

TEST(CoderivativeTest, StripTableKappaOne) {
  const CoderivativeEngine engine(kx_box(1));
  const Rational half(1, 2);
  for (CoderivativeKind kind : kKinds) {
    const CoderivativeValue a = engine.compute(kind, {0}, {half}, {0});
    EXPECT_EQ(a.type(), "points");
    EXPECT_EQ(a.points, std::vector<QVec>{QVec{0}});
    EXPECT_TRUE(engine.compute(kind, {0}, {half}, {1}).empty());
    EXPECT_EQ(engine.compute(kind, {0}, {0}, {1}).points, std::vector<QVec>{QVec{1}});
    EXPECT_EQ(engine.compute(kind, {0}, {1}, {-1}).points, std::vector<QVec>{QVec{-1}});
    EXPECT_TRUE(engine.compute(kind, {0}, {0}, {-1}).empty());
    EXPECT_TRUE(engine.compute(kind, {0}, {0}, {-1}).exact);
  }
}

TEST(CoderivativeTest, IdentityReturnsDirection) {
  const CoderivativeEngine one(make_rational_map(1, {"x"}));
  EXPECT_EQ(one.regular({7}, {7}, {-3}).points, std::vector<QVec>{QVec{-3}});
  const CoderivativeEngine two(make_rational_map(2, {"x1", "x2"}));
  const QVec w{Rational(3, 5), Rational(-4, 5)};
  EXPECT_EQ(two.regular({1, 2}, {1, 2}, w).points, std::vector<QVec>{w});
  EXPECT_EQ(two.limiting({1, 2}, {1, 2}, w).points, std::vector<QVec>{w});
}

TEST(CoderivativeTest, NegativeReciprocal) {
  const OperatorPtr T = make_rational_map(1, {"-1/x"});
  const CoderivativeEngine engine(T);
  const CoderivativeValue z = engine.regular({2}, {Rational(-1, 2)}, {3});
  ASSERT_EQ(z.points.size(), 1u);
  EXPECT_EQ(z.points[0], QVec{Rational(3, 4)});
  // Central difference of -1/x at 2 times w.
  const double h = 1e-5;
  const double fd = (-1.0 / (2.0 + h) + 1.0 / (2.0 - h)) / (2 * h) * 3.0;
  EXPECT_NEAR(to_double(z.points[0][0]), fd, 1e-8);
}

TEST(CoderivativeTest, RationalMapAdjointInTwoDimensions) {
  // T(x) = (x1 x2, x1 + x2^2), J = [[x2, x1], [1, 2 x2]], value J' w.
  const CoderivativeEngine engine(make_rational_map(2, {"x1*x2", "x1 + x2^2"}));
  const QVec u{2, 3};
  const QVec v{6, 11};
  const QVec w{1, -1};
  EXPECT_EQ(engine.regular(u, v, w).points, (std::vector<QVec>{QVec{3 - 1, 2 - 6}}));
}

TEST(CoderivativeTest, OffGraphThrows) {
  const CoderivativeEngine engine(kx_box(1));
  try {
    engine.regular({0}, {2}, {1});
    FAIL() << "expected NotOnGraph";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotOnGraph);
  }
}

TEST(CoderivativeTest, AbsvalAtSegmentInterior) {
  const CoderivativeEngine engine(absval_subdiff());
  for (CoderivativeKind kind : kKinds) {
    const CoderivativeValue zero = engine.compute(kind, {0}, {0}, {0});
    EXPECT_TRUE(zero.contains({0}));
    EXPECT_TRUE(zero.contains({-9}));
    EXPECT_TRUE(zero.contains({9}));
    EXPECT_TRUE(engine.compute(kind, {0}, {0}, {1}).empty());
  }
}

TEST(CoderivativeTest, AbsvalKinkLimitingExceedsRegular) {
  const CoderivativeEngine engine(absval_subdiff());
  const CoderivativeValue reg_neg = engine.regular({0}, {1}, {-1});
  EXPECT_TRUE(reg_neg.contains({-2}));
  EXPECT_TRUE(reg_neg.contains({0}));
  EXPECT_FALSE(reg_neg.contains({1}));
  EXPECT_TRUE(engine.regular({0}, {1}, {1}).empty());

  const CoderivativeValue lim = engine.limiting({0}, {1}, {1});
  EXPECT_TRUE(lim.contains({0}));
  EXPECT_FALSE(lim.contains({1}));
  EXPECT_TRUE(value_subset(engine.regular({0}, {1}, {-1}), engine.limiting({0}, {1}, {-1})));
}

TEST(CoderivativeTest, SmoothPieceOfAbsval) {
  const CoderivativeEngine engine(absval_subdiff());
  for (CoderivativeKind kind : kKinds) {
    EXPECT_EQ(engine.compute(kind, {3}, {1}, {2}).points, std::vector<QVec>{QVec{0}});
  }
}

TEST(CoderivativeShiftTest, ZeroShiftIsIdentity) {
  const OperatorPtr T = absval_subdiff();
  const CoderivativeEngine engine(T);
  for (int w : {-1, 0, 1}) {
    EXPECT_TRUE(values_equal(coderivative_shift(T, 0, {0}, {1}, {w}), engine.regular({0}, {1}, {w})));
  }
}

TEST(CoderivativeShiftTest, AbsvalPlusIdentity) {
  const OperatorPtr T = absval_subdiff();
  const CoderivativeEngine direct(make_shift_identity(T, 1));
  for (int w : {-1, 0, 1}) {
    for (CoderivativeKind kind : kKinds) {
      const CoderivativeValue rule = coderivative_shift(T, 1, {0}, {1}, {w}, kind);
      EXPECT_TRUE(values_equal(rule, direct.compute(kind, {0}, {1}, {w}))) << w;
    }
  }
  const CoderivativeValue v = coderivative_shift(T, 1, {0}, {1}, {-1});
  EXPECT_TRUE(v.contains({-1}));
  EXPECT_TRUE(v.contains({-5}));
  EXPECT_FALSE(v.contains({0}));
}

TEST(CoderivativeShiftTest, StripTableShiftsByKappa) {
  const OperatorPtr flat = kx_box(0);
  for (int kappa : {1, 2}) {
    const CoderivativeEngine steep(kx_box(kappa));
    for (int k = -2; k <= 2; ++k) {
      const Rational u = ratio(k, 2);
      for (const Rational& t : {Rational(0), Rational(1, 2), Rational(1)}) {
        const Rational v = kappa * u + t;
        for (int w : {-1, 0, 1}) {
          EXPECT_TRUE(values_equal(steep.regular({u}, {v}, {w}), coderivative_shift(flat, kappa, {u}, {v}, {w})));
        }
      }
    }
  }
}

TEST(SecondOrderTest, SmoothQuadratic) {
  const MaxQuadFunction f = cli::quad_max(1, {cli::piece1(2, 0, 0)});
  EXPECT_EQ(second_order_combined(f, {1}, {2}, {5}).points, std::vector<QVec>{QVec{10}});
  EXPECT_EQ(second_order_limiting(f, {1}, {2}, {5}).points, std::vector<QVec>{QVec{10}});
}

TEST(SecondOrderTest, AbsvalMatchesOperatorEngine) {
  const MaxQuadFunction f = cli::quad_max(1, {cli::piece1(0, 1, 0), cli::piece1(0, -1, 0)});
  const CoderivativeEngine engine(absval_subdiff());
  for (const Rational& v : {Rational(-1), Rational(0), Rational(1)}) {
    for (int w : {-1, 0, 1}) {
      EXPECT_TRUE(values_equal(second_order_combined(f, {0}, {v}, {w}), engine.regular({0}, {v}, {w})));
      EXPECT_TRUE(values_equal(second_order_limiting(f, {0}, {v}, {w}), engine.limiting({0}, {v}, {w})));
    }
  }
}

TEST(SecondOrderTest, SharedQuadraticSinglePiece) {
  // f = x'Qx/2 + max(a1'x, a2'x), only a1 active at u.
  const QRows Q{{2, 1}, {1, 3}};
  MaxQuadFunction f;
  f.dim = 2;
  f.pieces.push_back({Q, {1, 0}, 0});
  f.pieces.push_back({Q, {0, 1}, 0});
  const QVec u{2, 1};
  const QVec v = add(mat_vec(Q, u), QVec{1, 0});
  const QVec w{1, -2};
  EXPECT_EQ(second_order_combined(f, u, v, w).points, std::vector<QVec>{mat_vec(Q, w)});
  EXPECT_EQ(second_order_limiting(f, u, v, w).points, std::vector<QVec>{mat_vec(Q, w)});
}

TEST(SecondOrderTest, SampledFallbackIsTagged) {
  MaxQuadFunction f;
  f.dim = 2;
  f.pieces.push_back({{{1, 0}, {0, 1}}, {0, 0}, 0});
  f.pieces.push_back({{{3, 0}, {0, 1}}, {0, 0}, -1});
  // Both pieces are active at (1, 0); only the first has gradients near v = (1, 0).
  const CoderivativeValue lim = second_order_limiting(f, {1, 0}, {1, 0}, {1, 0});
  EXPECT_FALSE(lim.exact);
  ASSERT_TRUE(lim.schedule.has_value());
  ASSERT_FALSE(lim.points.empty());
  for (const auto& z : lim.points) {
    EXPECT_NEAR(to_double(z[0]), 1.0, 1e-6);
    EXPECT_NEAR(to_double(z[1]), 0.0, 1e-6);
  }
  EXPECT_THROW(second_order_combined(f, {1, 0}, {1, 0}, {1, 0}), Error);
}

}  // namespace
}  // namespace monocone
