#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monocone/max_quad.hpp"
#include "monocone/monotonicity.hpp"

namespace monocone {

/// conv{grad f_i(x) : i active}, kept as its generating gradients.
struct Subgradients {
  std::vector<QVec> generators;

  bool contains(const QVec& v) const;
  double max_norm() const;
};

/// Exact activity at a rational point.
Subgradients subdifferential(const MaxQuadFunction& f, const QVec& x);
/// Pieces within `activity_tol` of the max at a floating point.
std::vector<std::vector<double>> subdifferential(const MaxQuadFunction& f, const std::vector<double>& x,
                                                 double activity_tol = 1e-10);

/// f(lambda x + (1 - lambda) y) exceeds the strong-convexity bound by `gap`.
struct MidpointWitness {
  QVec x;
  QVec y;
  Rational lambda;
  Rational gap;
};

/// Checks f(l x + (1-l) y) <= l f(x) + (1-l) f(y) - (kappa/2) l (1-l) |x - y|^2.
Rational midpoint_gap(const MaxQuadFunction& f, const QVec& x, const QVec& y, const Rational& lambda,
                      const Rational& kappa);

enum class ConvexityKind { kConvex, kNotConvex, kStronglyConvex, kNotStronglyConvex, kInconclusive };
std::string convexity_kind_name(ConvexityKind kind);

struct ConvexityConfig {
  SampleConfig region;
  std::size_t max_points = 80;
  SampleSchedule schedule;

  static ConvexityConfig standard(std::size_t dim);
};

struct ConvexityVerdict {
  ConvexityKind kind = ConvexityKind::kInconclusive;
  Rational kappa;
  bool exact = false;
  std::string reason;
  std::optional<PSDWitness> second_order;
  std::optional<MidpointWitness> primal;
  bool primal_missing = false;  // second-order witness only
  PSDReport combined;
  PSDReport limiting;

  bool positive() const { return kind == ConvexityKind::kConvex || kind == ConvexityKind::kStronglyConvex; }
};

/// Second-order test with threshold kappa |w|^2 on gph of the subdifferential.
ConvexityVerdict second_order_threshold_check(const MaxQuadFunction& f, const Rational& kappa,
                                              const ConvexityConfig& cfg);
ConvexityVerdict convexity_check_second_order(const MaxQuadFunction& f, const ConvexityConfig& cfg);

/// Runs the threshold route and the shifted-function route; RoutesDisagree if they differ.
ConvexityVerdict strong_convexity_check(const MaxQuadFunction& f, const Rational& kappa, const ConvexityConfig& cfg);

struct ModulusEstimate {
  std::optional<Rational> kappa_star;  // largest passing grid value
  std::vector<std::pair<Rational, bool>> results;
};

ModulusEstimate strong_modulus_estimate(const MaxQuadFunction& f, const std::vector<Rational>& kappa_grid,
                                        const ConvexityConfig& cfg);

struct OracleResult {
  bool passes = true;
  std::optional<MidpointWitness> witness;
  std::size_t checked = 0;
  double min_margin = 0.0;  // smallest bound - value seen
};

/// Seeded rational triples (x, y, lambda) with x, y in [-half_width, half_width]^n.
OracleResult convexity_oracle_sampling(const MaxQuadFunction& f, std::size_t triple_count, std::uint64_t seed,
                                       const Rational& kappa = 0, const Rational& half_width = 3);

/// Searches f(u) > (f(u + t d) + f(u - t d)) / 2 near u along the given directions.
std::optional<MidpointWitness> primal_witness_search(const MaxQuadFunction& f, const QVec& u,
                                                     const std::vector<QVec>& directions, const Rational& kappa = 0);

struct MeanValueReport {
  double lhs = 0.0;            // |f(b) - f(a)|
  double segment_length = 0.0;
  double grid_sup = 0.0;       // max subgradient norm at grid points of [a,b] + eps B
  double spacing = 0.0;        // covering radius of the grid
  double bound = 0.0;          // rigorous upper bound on the sup over the inflated segment
  std::size_t grid_points = 0;
  bool passes = true;
};

MeanValueReport mean_value_inequality_test(const MaxQuadFunction& f, const std::vector<double>& a,
                                           const std::vector<double>& b, double eps, unsigned grid_density = 41);

}  // namespace monocone
