#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "monocone/hpolyhedron.hpp"
#include "monocone/max_quad.hpp"
#include "monocone/polynomial.hpp"
#include "monocone/stratification.hpp"

namespace monocone {

struct OperatorSpec;
using OperatorPtr = std::shared_ptr<const OperatorSpec>;

/// T(x) = (r_1(x), ..., r_n(x)) on the open set where every denominator is nonzero.
struct RationalMapSpec {
  std::vector<std::string> expressions;
  std::vector<RationalFunction> components;
};

/// T(x) = A x + b + [lo, hi]; a missing bound is infinite.
struct AffineBoxSpec {
  QRows A;
  QVec b;
  std::vector<std::optional<Rational>> lo;
  std::vector<std::optional<Rational>> hi;
};

/// gph T is the union of the pieces, each a polyhedron in R^(2n) over (u, v).
struct PolyhedralGraphSpec {
  PieceList pieces;
};

struct MaxQuadSubdiffSpec {
  MaxQuadFunction f;
};

struct ShiftIdentitySpec {
  OperatorPtr base;
  Rational s;
};

struct ShiftDownSpec {
  OperatorPtr base;
  Rational kappa;
};

struct InverseSpec {
  OperatorPtr base;
};

namespace detail {
struct CompileCache {
  std::once_flag once;
  std::optional<PieceList> pieces;
  std::string failure;
};
}  // namespace detail

struct OperatorSpec {
  std::size_t dim = 0;
  std::variant<RationalMapSpec, AffineBoxSpec, PolyhedralGraphSpec, MaxQuadSubdiffSpec, ShiftIdentitySpec, ShiftDownSpec,
               InverseSpec>
      variant;
  // Filled on first compile_to_polyhedral call; shared by copies.
  std::shared_ptr<detail::CompileCache> compiled = std::make_shared<detail::CompileCache>();
};

OperatorPtr make_rational_map(std::size_t dim, const std::vector<std::string>& expressions);
OperatorPtr make_affine_box(QRows A, QVec b, std::vector<std::optional<Rational>> lo,
                            std::vector<std::optional<Rational>> hi);
/// Empty pieces are dropped with a warning on stderr.
OperatorPtr make_polyhedral_graph(std::size_t dim, PieceList pieces);
OperatorPtr make_max_quad_subdiff(MaxQuadFunction f);
OperatorPtr make_shift_identity(OperatorPtr base, Rational s);
OperatorPtr make_shift_down(OperatorPtr base, Rational kappa);
OperatorPtr make_inverse(OperatorPtr base);

std::string variant_name(const OperatorSpec& T);

/// Exact description of T(u).
struct ValueSet {
  std::vector<QVec> points;
  std::vector<HPolyhedron> polyhedra;

  bool empty() const { return points.empty() && polyhedra.empty(); }
  bool contains(const QVec& v) const;
  std::string to_string() const;
};

ValueSet evaluate(const OperatorSpec& T, const QVec& u);
bool in_domain(const OperatorSpec& T, const QVec& u);
/// True when dom T is all of R^n by construction.
bool has_full_domain(const OperatorSpec& T);

/// Finite representatives of a value set: points, vertices, a central point, vertex + ray.
std::vector<QVec> representative_values(const ValueSet& V);

/// Exact graph pieces, or NotCompilable.
PieceList compile_to_polyhedral(const OperatorSpec& T);
bool is_compilable(const OperatorSpec& T);

/// Jacobian of a RationalMap at u (nullopt outside the domain).
std::optional<QRows> rational_map_jacobian(const RationalMapSpec& m, const QVec& u);

struct GraphPoint {
  QVec u;
  QVec v;
  std::string provenance;
};

struct SampleConfig {
  QVec lo;
  QVec hi;
  unsigned density = 5;
  std::uint64_t seed = 1;
  double jitter = 0.0;

  static SampleConfig box(std::size_t dim, const Rational& lo, const Rational& hi, unsigned density,
                          std::uint64_t seed = 1, double jitter = 0.0);
  void validate(std::size_t dim) const;
};

/// Deterministic sample of gph T over the region (see SampleConfig).
std::vector<GraphPoint> graph_sample(const OperatorSpec& T, const SampleConfig& cfg);

}  // namespace monocone
