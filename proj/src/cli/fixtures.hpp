#pragma once

#include <optional>
#include <string>
#include <vector>

#include "monocone/max_quad.hpp"
#include "monocone/operator_json.hpp"
#include "monocone/operator_model.hpp"

namespace monocone::cli {

enum class FixtureKind { kMaximal, kConvex };

struct Fixture {
  std::string name;
  FixtureKind kind = FixtureKind::kMaximal;
  OperatorPtr op;                         // kMaximal
  std::optional<MaxQuadFunction> function;  // kConvex
  std::string expected;                   // verdict name under the default run config
  Rational kappa;
  std::string anchor;  // one-line description of the fixture
};

const std::vector<Fixture>& fixture_catalog();
const Fixture* find_fixture(const std::string& name);

/// Operator or function JSON with a "fixture" metadata object.
Json fixture_to_json(const Fixture& fx);

struct CatalogFunction {
  std::string name;
  MaxQuadFunction f;
  bool convex = false;
};

/// Ten convex and ten nonconvex finite maxima of quadratics (n = 1 and shared-Q n = 2).
const std::vector<CatalogFunction>& function_catalog();

/// Builders used by the catalogs and tests.
MaxQuadFunction quad_max(std::size_t dim, std::vector<MaxQuadFunction::Piece> pieces);
MaxQuadFunction::Piece piece1(const Rational& q, const Rational& c, const Rational& d);
OperatorPtr absval_subdiff();
OperatorPtr kx_box(const Rational& kappa);
/// Q x + subdifferential of |x|_1 as a shared-Q max of quadratics.
OperatorPtr quad_plus_l1(const QRows& Q);

}  // namespace monocone::cli
