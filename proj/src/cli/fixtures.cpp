#include "cli/fixtures.hpp"

namespace monocone::cli {

namespace {

using Piece = MaxQuadFunction::Piece;

QRows diag(std::initializer_list<Rational> d) {
  QRows Q(d.size(), zeros(d.size()));
  std::size_t i = 0;
  for (const auto& x : d) {
    Q[i][i] = x;
    ++i;
  }
  return Q;
}

QRows mat2(const Rational& a, const Rational& b, const Rational& c, const Rational& d) { return {{a, b}, {c, d}}; }

Piece piece2(const QRows& Q, const Rational& c1, const Rational& c2, const Rational& d = 0) { return Piece{Q, {c1, c2}, d}; }

std::vector<Piece> l1_pieces(const QRows& Q) {
  return {piece2(Q, 1, 1), piece2(Q, 1, -1), piece2(Q, -1, 1), piece2(Q, -1, -1)};
}

std::vector<Fixture> build_fixtures() {
  std::vector<Fixture> out;
  auto op_fixture = [&](std::string name, OperatorPtr op, std::string expected, std::string anchor,
                        Rational kappa = 0) {
    Fixture fx;
    fx.name = std::move(name);
    fx.op = std::move(op);
    fx.expected = std::move(expected);
    fx.anchor = std::move(anchor);
    fx.kappa = kappa;
    out.push_back(std::move(fx));
  };
  auto fn_fixture = [&](std::string name, MaxQuadFunction f, std::string expected, std::string anchor,
                        Rational kappa = 0) {
    Fixture fx;
    fx.name = std::move(name);
    fx.kind = FixtureKind::kConvex;
    fx.function = std::move(f);
    fx.expected = std::move(expected);
    fx.anchor = std::move(anchor);
    fx.kappa = kappa;
    out.push_back(std::move(fx));
  };

  op_fixture("identity", make_rational_map(1, {"x"}), "MaximalMonotone", "T(x) = x");
  op_fixture("absval-subdiff", absval_subdiff(), "MaximalMonotone", "subdifferential of |x| as a 3-piece graph");
  op_fixture("kx-box", kx_box(1), "NotMonotone", "T(x) = kappa x + [0, 1] with kappa = 1");
  op_fixture("kx-box-flat", kx_box(0), "NotMonotone", "T(x) = [0, 1]");
  op_fixture("inv-neg", make_rational_map(1, {"-1/x"}), "NotMonotone", "T(x) = -1/x on x != 0");
  op_fixture("neg-identity", make_rational_map(1, {"-x"}), "NotMonotone", "T(x) = -x");
  op_fixture("quad-absval-strong", quad_plus_l1(diag({2, 4})), "StronglyMaximalMonotone",
             "T(x) = diag(2,4) x + subdifferential of |x|_1", 2);
  op_fixture("affine-psd", make_affine_box(mat2(2, 1, -1, 1), {1, -1}, {Rational(0), Rational(0)},
                                           {Rational(0), Rational(0)}),
             "MaximalMonotone", "T(x) = A x + b with A + A' positive definite");

  fn_fixture("convex-absval", quad_max(1, {piece1(0, 1, 0), piece1(0, -1, 0)}), "Convex", "f(x) = |x|");
  fn_fixture("concave-square", quad_max(1, {piece1(-2, 0, 0)}), "NotConvex", "f(x) = -x^2");
  fn_fixture("strong-diag", quad_max(2, {piece2(diag({2, 4}), 0, 0)}), "StronglyConvex",
             "f(x) = x'diag(2,4)x / 2 with kappa = 2", 2);
  return out;
}

std::vector<CatalogFunction> build_functions() {
  std::vector<CatalogFunction> out;
  auto add = [&](std::string name, MaxQuadFunction f, bool convex) {
    out.push_back(CatalogFunction{std::move(name), std::move(f), convex});
  };
  const QRows I2 = diag({1, 1});
  const QRows Z2 = diag({0, 0});
  add("abs", quad_max(1, {piece1(0, 1, 0), piece1(0, -1, 0)}), true);
  add("square", quad_max(1, {piece1(2, 0, 0)}), true);
  add("max(x^2-1,0)", quad_max(1, {piece1(2, 0, -1), piece1(0, 0, 0)}), true);
  add("max(x^2,2x-1)", quad_max(1, {piece1(2, 0, 0), piece1(0, 2, -1)}), true);
  add("max(x,x^2)", quad_max(1, {piece1(0, 1, 0), piece1(2, 0, 0)}), true);
  add("x^2/2+|x|", quad_max(1, {piece1(1, 1, 0), piece1(1, -1, 0)}), true);
  add("quad-diag(2,4)", quad_max(2, {piece2(diag({2, 4}), 0, 0)}), true);
  add("l1-norm", quad_max(2, l1_pieces(Z2)), true);
  add("|x|^2/2+max(x1,x2)", quad_max(2, {piece2(I2, 1, 0), piece2(I2, 0, 1)}), true);
  {
    const QRows Q = mat2(2, 1, 1, 2);
    add("quad[[2,1],[1,2]]+max(x1+x2,-x1,0)", quad_max(2, {piece2(Q, 1, 1), piece2(Q, -1, 0), piece2(Q, 0, 0)}),
        true);
  }
  add("-x^2", quad_max(1, {piece1(-2, 0, 0)}), false);
  add("max(-x^2,x-2)", quad_max(1, {piece1(-2, 0, 0), piece1(0, 1, -2)}), false);
  add("|x^2-1|", quad_max(1, {piece1(2, 0, -1), piece1(-2, 0, 1)}), false);
  add("max(0,1-x^2)", quad_max(1, {piece1(0, 0, 0), piece1(-2, 0, 1)}), false);
  add("max(-x^2+x,-x)", quad_max(1, {piece1(-2, 1, 0), piece1(0, -1, 0)}), false);
  add("max(x^2,8-x^2)", quad_max(1, {piece1(2, 0, 0), piece1(-2, 0, 8)}), false);
  add("-|x|^2/2", quad_max(2, {piece2(diag({-1, -1}), 0, 0)}), false);
  {
    const QRows Q = diag({2, -1});
    add("quad-diag(2,-1)+|x1|", quad_max(2, {piece2(Q, 1, 0), piece2(Q, -1, 0)}), false);
  }
  {
    const QRows Q = mat2(1, 2, 2, 1);
    add("quad[[1,2],[2,1]]+max(x1+x2,0)", quad_max(2, {piece2(Q, 1, 1), piece2(Q, 0, 0)}), false);
  }
  add("l1-norm-x2^2", quad_max(2, l1_pieces(diag({0, -2}))), false);
  return out;
}

}  // namespace

MaxQuadFunction quad_max(std::size_t dim, std::vector<MaxQuadFunction::Piece> pieces) {
  MaxQuadFunction f;
  f.dim = dim;
  f.pieces = std::move(pieces);
  f.validate();
  return f;
}

MaxQuadFunction::Piece piece1(const Rational& q, const Rational& c, const Rational& d) { return Piece{{{q}}, {c}, d}; }

OperatorPtr absval_subdiff() {
  PieceList pieces;
  HPolyhedron left = HPolyhedron::whole_space(2);
  left.add_inequality({1, 0}, 0);
  left.add_equality({0, 1}, -1);
  HPolyhedron middle = HPolyhedron::whole_space(2);
  middle.add_equality({1, 0}, 0);
  middle.add_inequality({0, 1}, 1);
  middle.add_inequality({0, -1}, 1);
  HPolyhedron right = HPolyhedron::whole_space(2);
  right.add_inequality({-1, 0}, 0);
  right.add_equality({0, 1}, 1);
  pieces.push_back(std::move(left));
  pieces.push_back(std::move(middle));
  pieces.push_back(std::move(right));
  return make_polyhedral_graph(1, std::move(pieces));
}

OperatorPtr kx_box(const Rational& kappa) {
  return make_affine_box({{kappa}}, {Rational(0)}, {Rational(0)}, {Rational(1)});
}

OperatorPtr quad_plus_l1(const QRows& Q) { return make_max_quad_subdiff(quad_max(2, l1_pieces(Q))); }

const std::vector<Fixture>& fixture_catalog() {
  static const std::vector<Fixture> catalog = build_fixtures();
  return catalog;
}

const Fixture* find_fixture(const std::string& name) {
  for (const auto& fx : fixture_catalog()) {
    if (fx.name == name) return &fx;
  }
  return nullptr;
}

Json fixture_to_json(const Fixture& fx) {
  Json j = fx.kind == FixtureKind::kMaximal ? operator_to_json(*fx.op) : function_to_json(*fx.function);
  Json meta;
  meta["name"] = fx.name;
  meta["analysis"] = fx.kind == FixtureKind::kMaximal ? "check-maximal" : "check-convex";
  meta["expected"] = fx.expected;
  meta["kappa"] = rational_to_json(fx.kappa);
  meta["anchor"] = fx.anchor;
  j["fixture"] = std::move(meta);
  return j;
}

const std::vector<CatalogFunction>& function_catalog() {
  static const std::vector<CatalogFunction> catalog = build_functions();
  return catalog;
}

}  // namespace monocone::cli
