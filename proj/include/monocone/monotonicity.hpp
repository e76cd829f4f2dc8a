#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "monocone/coderivative.hpp"
#include "monocone/operator_model.hpp"

namespace monocone {

inline constexpr double kTieTolerance = 1e-12;

// ---------------------------------------------------------------- pairwise

struct PairwiseReport {
  double inf_quotient = std::numeric_limits<double>::infinity();  // over pairs with u1 != u2
  double inf_product = std::numeric_limits<double>::infinity();
  Rational witness_product;  // exact product of the worst pair
  std::optional<std::pair<GraphPoint, GraphPoint>> witness;           // worst product
  std::optional<std::pair<GraphPoint, GraphPoint>> quotient_witness;  // worst quotient
  std::size_t pairs = 0;

  bool monotone() const { return inf_product >= -kTieTolerance; }
};

/// Exhaustive sweep over all sample pairs.
PairwiseReport pairwise_monotone_test(const OperatorSpec& T, const std::vector<GraphPoint>& samples);

// ------------------------------------------------------- hypomonotonicity

struct CloseSchedule {
  std::vector<Rational> distances;  // decreasing; defaults to 1e-1 .. 1e-6
  std::size_t max_centers = 48;

  static CloseSchedule standard();
};

struct CloseLevel {
  Rational distance;
  bool any_pairs = false;
  double min_quotient = std::numeric_limits<double>::infinity();
  double scaled_blowup = 0.0;  // -distance * min_quotient
};

struct HypomonotonicityReport {
  double r_hat = 0.0;  // +inf when divergent
  bool divergent = false;
  double inf_quotient = std::numeric_limits<double>::infinity();
  std::vector<CloseLevel> levels;
  std::optional<std::pair<GraphPoint, GraphPoint>> witness;  // worst quotient pair
};

/// Closed Euclidean ball restricting all u components (semilocal estimates).
struct Ball {
  QVec center;
  Rational radius;
  bool contains(const QVec& u) const;
};

/// r_hat = max(0, -inf quotient) over samples plus close pairs along the schedule.
/// Divergence: the scaled blowup -eps * min_quotient stays positive and does not
/// shrink by more than half between the last two distances.
HypomonotonicityReport hypomonotonicity_estimate(const OperatorSpec& T, const std::vector<GraphPoint>& samples,
                                                 const CloseSchedule& schedule = CloseSchedule::standard(),
                                                 const std::optional<Ball>& ball = std::nullopt);

struct SemilocalWindow {
  QVec center;
  Rational radius;
  double r = 0.0;
};

std::vector<Rational> default_radii();

/// First radius whose ball gives a finite modulus, or nullopt.
std::optional<SemilocalWindow> semilocal_hypomonotonicity(const OperatorSpec& T, const QVec& center,
                                                          const std::vector<Rational>& radii = default_radii(),
                                                          unsigned density = 9);

// -------------------------------------------------------------- PSD check

struct QueryPlan {
  std::vector<GraphPoint> points;
  std::vector<QVec> directions;
  bool exhaustive = false;  // also certify every stratum (polyhedral graphs only)
};

/// Rational unit directions: +-e_i and Pythagorean pairs such as (3/5, 4/5).
std::vector<QVec> unit_directions(std::size_t n);
QueryPlan make_query_plan(const CoderivativeEngine& engine, const SampleConfig& cfg, bool exhaustive,
                          std::size_t max_points = 400);

struct PSDWitness {
  GraphPoint point;
  QVec w;
  QVec z;
  Rational margin;  // <z,w> - kappa |w|^2 normalized by |w|^2 when from a stratum
  std::string source;
};

struct PSDReport {
  CoderivativeKind kind = CoderivativeKind::kRegular;
  Rational kappa;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::optional<PSDWitness> witness;
  bool exact = false;
  bool exhaustive = false;
  std::size_t queries = 0;
  std::size_t skipped = 0;  // queries with no available value
  std::size_t strata = 0;

  bool passes() const { return worst_margin >= -kTieTolerance; }
};

PSDReport psd_coderivative_check(const CoderivativeEngine& engine, CoderivativeKind kind, const Rational& kappa,
                                 const QueryPlan& plan);

// ------------------------------------------------------------------ Minty

struct MintySolve {
  QVec y;
  std::vector<QVec> u;  // solutions found (one when single-valued)
  bool multivalued = false;
};

struct MintyReport {
  Rational s;
  double r_hat = 0.0;
  std::vector<MintySolve> solves;
  double coverage = 0.0;
  std::size_t multivalued = 0;
  double max_ratio = 0.0;  // max |u1 - u2| / |y1 - y2| over single-valued solves
  double bound = 0.0;      // 1 / (s - r_hat)
  bool lipschitz_ok = true;
};

std::vector<QVec> default_y_grid(std::size_t n);
Rational default_shift(double r_hat);

/// Solves y in T(u) + s u for every y in the grid.
MintyReport minty_surjectivity_test(const OperatorSpec& T, const Rational& s, const std::vector<QVec>& y_grid,
                                    double r_hat);

// --------------------------------------------------------- segment chains

using WindowSupplier = std::function<std::optional<SemilocalWindow>(const QVec&)>;

WindowSupplier default_window_supplier(const OperatorSpec& T);

struct ChainCertificate {
  std::vector<Rational> ts;
  std::vector<QVec> points;
  std::vector<QVec> values;
  std::vector<Rational> link_products;  // <v_{j+1} - v_j, u2 - u1>
  Rational total;                       // sum of the links
  bool all_links_nonnegative = true;
};

ChainCertificate segment_chain_monotonicity(const OperatorSpec& T, const QVec& u1, const QVec& u2,
                                            const WindowSupplier& windows, std::size_t max_links = 64);

// ---------------------------------------------------------- domain probe

struct DomainProbeResult {
  bool passes = true;
  std::optional<QVec> witness;
  std::optional<std::pair<QVec, QVec>> pair;
  std::size_t checked = 0;
};

DomainProbeResult domain_convexity_probe(const OperatorSpec& T, const std::vector<QVec>& domain_points,
                                         int depth = 4);

// ---------------------------------------------------------------- verdict

enum class VerdictKind { kMaximalMonotone, kStronglyMaximalMonotone, kNotMonotone, kNotHypomonotone, kInconclusive };
std::string verdict_name(VerdictKind kind);

struct DecisionConfig {
  SampleConfig sample;
  Rational kappa = 0;
  std::optional<Rational> shift_s;
  std::vector<Rational> radii = default_radii();
  CloseSchedule close = CloseSchedule::standard();
  SampleSchedule schedule;
  std::size_t max_domain_points = 24;
  bool run_minty = true;
};

struct Verdict {
  VerdictKind kind = VerdictKind::kInconclusive;
  std::string route;      // "global" or "semilocal-convex-domain" for positive verdicts
  std::string qualifier;  // "certified-on-region" for smooth maps checked on a region
  Rational kappa;
  std::string reason;
  bool exact = false;

  PSDReport psd_regular;
  PSDReport psd_limiting;
  std::optional<PSDReport> psd_strong;
  PairwiseReport pairwise;
  HypomonotonicityReport hypo;
  std::vector<SemilocalWindow> windows;
  std::optional<DomainProbeResult> domain;
  std::optional<MintyReport> minty;
  std::optional<std::pair<GraphPoint, GraphPoint>> witness_pair;
};

Verdict maximality_decision(const OperatorPtr& T, const DecisionConfig& cfg);

}  // namespace monocone
