#include "cli/report_json.hpp"

#include <cmath>

namespace monocone::cli {

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == std::floor(x) && std::abs(x) < 9.0e15) return static_cast<long long>(x);
  return x;
}

Json approx(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return to_double(q);
}

Json approx(const QVec& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(approx(q));
  return a;
}

Json to_json(const GraphPoint& p) {
  Json j;
  j["u"] = qvec_to_json(p.u);
  j["v"] = qvec_to_json(p.v);
  j["provenance"] = p.provenance;
  return j;
}

namespace {

Json pair_json(const std::optional<std::pair<GraphPoint, GraphPoint>>& pair) {
  if (!pair) return nullptr;
  Json a = Json::array();
  a.push_back(to_json(pair->first));
  a.push_back(to_json(pair->second));
  return a;
}

}  // namespace

Json to_json(const CoderivativeValue& value) {
  Json j;
  j["w"] = qvec_to_json(value.w);
  j["kind"] = std::string(kind_name(value.kind));
  Json v;
  v["type"] = value.type();
  Json pts = Json::array();
  Json exact = Json::array();
  for (const auto& z : value.points) {
    pts.push_back(approx(z));
    exact.push_back(qvec_to_json(z));
  }
  v["points"] = std::move(pts);
  v["points_exact"] = std::move(exact);
  Json polys = Json::array();
  for (const auto& P : value.polyhedra) polys.push_back(polyhedron_to_json(P));
  v["polyhedra"] = std::move(polys);
  j["value"] = std::move(v);
  j["exactness"] = value.exact ? "exact" : "sampled";
  if (value.schedule) {
    Json s;
    s["r0"] = value.schedule->r0;
    s["halvings"] = value.schedule->halvings;
    s["directions"] = value.schedule->directions;
    s["seed"] = value.schedule->seed;
    s["samples"] = value.sample_count;
    j["schedule"] = std::move(s);
  }
  return j;
}

Json to_json(const PairwiseReport& rep) {
  Json j;
  j["monotone"] = rep.monotone();
  j["pairs"] = rep.pairs;
  j["inf_product"] = number(rep.inf_product);
  j["inf_quotient"] = number(rep.inf_quotient);
  j["witness"] = pair_json(rep.witness);
  j["witness_product"] = rep.witness ? Json(rational_to_json(rep.witness_product)) : Json(nullptr);
  return j;
}

Json to_json(const HypomonotonicityReport& rep) {
  Json j;
  j["r_hat"] = number(rep.r_hat);
  j["divergent"] = rep.divergent;
  j["inf_quotient"] = number(rep.inf_quotient);
  Json levels = Json::array();
  for (const auto& l : rep.levels) {
    Json lj;
    lj["distance"] = rational_to_json(l.distance);
    lj["pairs"] = l.any_pairs;
    lj["min_quotient"] = number(l.min_quotient);
    lj["scaled_blowup"] = number(l.scaled_blowup);
    levels.push_back(std::move(lj));
  }
  j["levels"] = std::move(levels);
  j["witness"] = pair_json(rep.witness);
  return j;
}

Json to_json(const PSDWitness& w) {
  Json j;
  j["point"] = to_json(w.point);
  j["w"] = qvec_to_json(w.w);
  j["z"] = qvec_to_json(w.z);
  j["margin"] = rational_to_json(w.margin);
  j["source"] = w.source;
  return j;
}

Json to_json(const PSDReport& rep) {
  Json j;
  j["kind"] = std::string(kind_name(rep.kind));
  j["kappa"] = rational_to_json(rep.kappa);
  j["passes"] = rep.passes();
  j["worst_margin"] = number(rep.worst_margin);
  j["exact"] = rep.exact;
  j["exhaustive"] = rep.exhaustive;
  j["queries"] = rep.queries;
  j["skipped"] = rep.skipped;
  j["strata"] = rep.strata;
  j["witness"] = rep.witness ? to_json(*rep.witness) : Json(nullptr);
  return j;
}

Json to_json(const SemilocalWindow& w) {
  Json j;
  j["center"] = qvec_to_json(w.center);
  j["radius"] = rational_to_json(w.radius);
  j["r"] = number(w.r);
  return j;
}

Json to_json(const DomainProbeResult& rep) {
  Json j;
  j["passes"] = rep.passes;
  j["checked"] = rep.checked;
  j["witness"] = rep.witness ? qvec_to_json(*rep.witness) : Json(nullptr);
  if (rep.pair) j["pair"] = Json::array({qvec_to_json(rep.pair->first), qvec_to_json(rep.pair->second)});
  return j;
}

Json to_json(const MintyReport& rep) {
  Json j;
  j["s"] = rational_to_json(rep.s);
  j["r_hat"] = number(rep.r_hat);
  j["grid_size"] = rep.solves.size();
  j["coverage"] = number(rep.coverage);
  j["multivalued"] = rep.multivalued;
  j["max_ratio"] = number(rep.max_ratio);
  j["bound"] = number(rep.bound);
  j["lipschitz_ok"] = rep.lipschitz_ok;
  return j;
}

Json to_json(const Verdict& v) {
  Json j;
  j["verdict"] = verdict_name(v.kind);
  if (!v.route.empty()) j["route"] = v.route;
  if (!v.qualifier.empty()) j["qualifier"] = v.qualifier;
  j["kappa"] = rational_to_json(v.kappa);
  j["exact"] = v.exact;
  j["reason"] = v.reason;
  j["witness_pair"] = pair_json(v.witness_pair);
  Json ev;
  ev["psd_regular"] = to_json(v.psd_regular);
  ev["psd_limiting"] = to_json(v.psd_limiting);
  if (v.psd_strong) ev["psd_strong"] = to_json(*v.psd_strong);
  ev["pairwise"] = to_json(v.pairwise);
  ev["hypomonotonicity"] = to_json(v.hypo);
  Json windows = Json::array();
  for (const auto& w : v.windows) windows.push_back(to_json(w));
  ev["windows"] = std::move(windows);
  ev["domain_probe"] = v.domain ? to_json(*v.domain) : Json(nullptr);
  ev["minty"] = v.minty ? to_json(*v.minty) : Json(nullptr);
  j["evidence"] = std::move(ev);
  return j;
}

Json to_json(const MidpointWitness& w) {
  Json j;
  j["x"] = qvec_to_json(w.x);
  j["y"] = qvec_to_json(w.y);
  j["lambda"] = rational_to_json(w.lambda);
  j["gap"] = rational_to_json(w.gap);
  return j;
}

Json to_json(const ConvexityVerdict& v) {
  Json j;
  j["verdict"] = convexity_kind_name(v.kind);
  j["kappa"] = rational_to_json(v.kappa);
  j["exact"] = v.exact;
  j["reason"] = v.reason;
  j["second_order_witness"] = v.second_order ? to_json(*v.second_order) : Json(nullptr);
  j["primal_witness"] = v.primal ? to_json(*v.primal) : Json(nullptr);
  j["primal_missing"] = v.primal_missing;
  Json ev;
  ev["combined"] = to_json(v.combined);
  ev["limiting"] = to_json(v.limiting);
  j["evidence"] = std::move(ev);
  return j;
}

}  // namespace monocone::cli
