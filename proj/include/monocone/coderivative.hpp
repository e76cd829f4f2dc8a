#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "monocone/operator_model.hpp"
#include "monocone/poly_cone.hpp"
#include "monocone/stratification.hpp"

namespace monocone {

/// In R^n the mixed and normal limiting coderivatives agree, so one limiting kind is exposed.
enum class CoderivativeKind { kRegular, kLimiting };
std::string_view kind_name(CoderivativeKind kind);
CoderivativeKind parse_kind(std::string_view text);

/// Radius schedule for the sampled limiting fallback.
struct SampleSchedule {
  double r0 = 0.1;
  int halvings = 12;
  int directions = 64;
  std::uint64_t seed = 1;
  double dedup_tol = 1e-8;
};

/// {z : z in D*T(u,v)(w)} as a union of points and polyhedra.
struct CoderivativeValue {
  QVec w;
  CoderivativeKind kind = CoderivativeKind::kRegular;
  std::vector<QVec> points;
  std::vector<HPolyhedron> polyhedra;
  bool exact = true;
  std::optional<SampleSchedule> schedule;  // set when sampled
  std::size_t sample_count = 0;

  bool empty() const { return points.empty() && polyhedra.empty(); }
  std::string type() const;  // "empty", "points" or "polyhedra"
  bool contains(const QVec& z) const;
  std::string to_string() const;
};

using SecondOrderValue = CoderivativeValue;

/// {z : (z, -w) in K} for a cone K in R^(2n).
CoderivativeValue value_from_cone(const PolyCone& K, const QVec& w, CoderivativeKind kind);
/// Union of cone values, dropping duplicates.
CoderivativeValue value_from_cones(const std::vector<PolyCone>& cones, const QVec& w, CoderivativeKind kind);

/// Every piece of `a` lies inside a single piece of `b` (sufficient for a subset b).
bool value_subset(const CoderivativeValue& a, const CoderivativeValue& b);
/// Same points and mutually contained polyhedra, piece by piece.
bool values_equal(const CoderivativeValue& a, const CoderivativeValue& b);

class CoderivativeEngine {
 public:
  explicit CoderivativeEngine(OperatorPtr T, SampleSchedule schedule = {});

  const OperatorSpec& op() const { return *T_; }
  const OperatorPtr& op_ptr() const { return T_; }
  const SampleSchedule& schedule() const { return schedule_; }

  /// True when gph T compiled to exact polyhedral pieces.
  bool polyhedral() const { return pieces_.has_value(); }
  const PieceList& pieces() const;
  /// All strata of the compiled graph, built once on first use.
  const std::vector<Stratum>& strata() const;

  /// Regular normal cone of gph T at (u, v). Throws NotOnGraph / UnsupportedVariant.
  PolyCone regular_cone(const QVec& u, const QVec& v) const;
  /// Exact limiting family, or nullopt when only the sampled fallback applies.
  std::optional<std::vector<PolyCone>> limiting_cones(const QVec& u, const QVec& v) const;

  CoderivativeValue regular(const QVec& u, const QVec& v, const QVec& w) const;
  CoderivativeValue limiting(const QVec& u, const QVec& v, const QVec& w) const;
  CoderivativeValue compute(CoderivativeKind kind, const QVec& u, const QVec& v, const QVec& w) const;

  void require_on_graph(const QVec& u, const QVec& v) const;

 private:
  CoderivativeValue sampled_limiting(const OperatorSpec& T, const QVec& u, const QVec& v, const QVec& w) const;

  OperatorPtr T_;
  SampleSchedule schedule_;
  std::optional<PieceList> pieces_;
  struct StrataCache {
    std::once_flag once;
    std::vector<Stratum> strata;
  };
  std::shared_ptr<StrataCache> strata_ = std::make_shared<StrataCache>();
};

/// Sum rule with sI: D*(T + sI)(u, v)(w) = D*T(u, v - s u)(w) + s w.
CoderivativeValue coderivative_shift(const OperatorPtr& T, const Rational& s, const QVec& u, const QVec& v,
                                     const QVec& w, CoderivativeKind kind = CoderivativeKind::kRegular);

/// Second-order values as coderivatives of the subdifferential map.
SecondOrderValue second_order_combined(const MaxQuadFunction& f, const QVec& u, const QVec& v, const QVec& w);
SecondOrderValue second_order_limiting(const MaxQuadFunction& f, const QVec& u, const QVec& v, const QVec& w);

}  // namespace monocone
