#pragma once

#include "monocone/coderivative.hpp"
#include "monocone/convexity.hpp"
#include "monocone/monotonicity.hpp"
#include "monocone/operator_json.hpp"

namespace monocone::cli {

/// Finite doubles as numbers (integral values without a fraction), infinities as "inf"/"-inf".
Json number(double x);
/// Integral rationals as integers, others as doubles.
Json approx(const Rational& q);
Json approx(const QVec& v);

Json to_json(const GraphPoint& p);
Json to_json(const CoderivativeValue& value);
Json to_json(const PairwiseReport& rep);
Json to_json(const HypomonotonicityReport& rep);
Json to_json(const PSDWitness& w);
Json to_json(const PSDReport& rep);
Json to_json(const SemilocalWindow& w);
Json to_json(const DomainProbeResult& rep);
Json to_json(const MintyReport& rep);
Json to_json(const Verdict& v);
Json to_json(const MidpointWitness& w);
Json to_json(const ConvexityVerdict& v);

}  // namespace monocone::cli
