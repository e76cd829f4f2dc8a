#include "cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/fixtures.hpp"
#include "cli/report_json.hpp"
#include "monocone/convexity.hpp"
#include "monocone/error.hpp"
#include "monocone/monotonicity.hpp"

namespace monocone::cli {

namespace {

std::optional<std::string> fixture_field(const Json& spec, const char* key) {
  if (!spec.contains("fixture") || !spec["fixture"].is_object()) return std::nullopt;
  const Json& meta = spec["fixture"];
  if (!meta.contains(key) || !meta[key].is_string()) return std::nullopt;
  return meta[key].get<std::string>();
}

Rational effective_kappa(const Json& spec, const RunConfig& cfg) {
  if (cfg.kappa) return *cfg.kappa;
  if (auto k = fixture_field(spec, "kappa")) return parse_rational(*k);
  return 0;
}

std::optional<std::string> effective_expect(const Json& spec, const std::optional<std::string>& expect) {
  return expect ? expect : fixture_field(spec, "expected");
}

void apply_expectation(CommandResult& res, const std::string& actual, const std::optional<std::string>& expect) {
  if (!expect) return;
  res.report["expected"] = *expect;
  res.report["matches_expected"] = actual == *expect;
  if (actual != *expect) {
    res.exit_code = 1;
    res.summary += " (expected " + *expect + ")";
  }
}

DecisionConfig decision_config(const RunConfig& cfg, std::size_t dim, const Rational& kappa) {
  DecisionConfig d;
  d.sample = sample_config(cfg, dim);
  d.kappa = kappa;
  d.shift_s = cfg.shift_s;
  if (!cfg.radii.empty()) d.radii = cfg.radii;
  d.schedule.seed = cfg.seed;
  return d;
}

ConvexityConfig convexity_config(const RunConfig& cfg, std::size_t dim) {
  ConvexityConfig c = ConvexityConfig::standard(dim);
  if (cfg.region) {
    c.region = sample_config(cfg, dim);
  } else if (cfg.density) {
    c.region.density = *cfg.density;
  }
  c.region.seed = cfg.seed;
  c.schedule.seed = cfg.seed;
  return c;
}

}  // namespace

Json RunConfig::to_json() const {
  Json j;
  j["seed"] = seed;
  j["region"] = region ? Json::array({rational_to_json(region->first), rational_to_json(region->second)}) : Json(nullptr);
  j["density"] = density ? Json(*density) : Json(nullptr);
  Json r = Json::array();
  for (const auto& x : radii) r.push_back(rational_to_json(x));
  j["radii"] = std::move(r);
  j["shift_s"] = shift_s ? rational_to_json(*shift_s) : Json(nullptr);
  j["kappa"] = kappa ? rational_to_json(*kappa) : Json(nullptr);
  j["kind"] = std::string(kind_name(kind));
  j["out"] = out.empty() ? Json(nullptr) : Json(out);
  return j;
}

QVec parse_qvec_list(const std::string& text) {
  QVec out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw Error(ErrorKind::kParse, "empty vector '" + text + "'");
  return out;
}

std::pair<Rational, Rational> parse_region(const std::string& text) {
  const QVec v = parse_qvec_list(text);
  if (v.size() != 2 || !(v[0] < v[1])) throw Error(ErrorKind::kParse, "region must be 'lo,hi' with lo < hi");
  return {v[0], v[1]};
}

SampleConfig sample_config(const RunConfig& cfg, std::size_t dim) {
  const Rational lo = cfg.region ? cfg.region->first : Rational(-2);
  const Rational hi = cfg.region ? cfg.region->second : Rational(2);
  const unsigned density = cfg.density ? *cfg.density : (dim == 1 ? 9 : 5);
  return SampleConfig::box(dim, lo, hi, density, cfg.seed);
}

CommandResult cmd_coderivative(const Json& spec, const QVec& point, const QVec& w, const RunConfig& cfg) {
  const OperatorPtr T = operator_from_json(spec);
  const std::size_t n = T->dim;
  if (point.size() != 2 * n) {
    throw Error(ErrorKind::kDimensionMismatch, "--point needs " + std::to_string(2 * n) + " entries (u then v)");
  }
  if (w.size() != n) throw Error(ErrorKind::kDimensionMismatch, "--dir needs " + std::to_string(n) + " entries");
  SampleSchedule schedule;
  schedule.seed = cfg.seed;
  const CoderivativeEngine engine(T, schedule);
  const QVec u = slice(point, 0, n);
  const QVec v = slice(point, n, n);
  const CoderivativeValue value = engine.compute(cfg.kind, u, v, w);

  CommandResult res;
  res.report["config"] = cfg.to_json();
  res.report["operator"] = variant_name(*T);
  res.report["u"] = qvec_to_json(u);
  res.report["v"] = qvec_to_json(v);
  const Json body = to_json(value);
  for (const auto& [key, val] : body.items()) res.report[key] = val;
  res.summary = std::string(kind_name(cfg.kind)) + " coderivative at (" + to_string(u) + ", " + to_string(v) +
                ") in direction " + to_string(w) + ": " + value.to_string();
  return res;
}

CommandResult cmd_check_monotone(const Json& spec, const RunConfig& cfg) {
  const OperatorPtr T = operator_from_json(spec);
  const std::vector<GraphPoint> samples = graph_sample(*T, sample_config(cfg, T->dim));
  const PairwiseReport pairwise = pairwise_monotone_test(*T, samples);
  const HypomonotonicityReport hypo = hypomonotonicity_estimate(*T, samples);

  CommandResult res;
  res.report["config"] = cfg.to_json();
  res.report["operator"] = variant_name(*T);
  res.report["samples"] = samples.size();
  res.report["pairwise"] = to_json(pairwise);
  res.report["hypomonotonicity"] = to_json(hypo);
  std::ostringstream s;
  s << (pairwise.monotone() ? "no violating pair" : "violating pair found") << " among " << samples.size()
    << " samples; " << (hypo.divergent ? "hypomonotonicity estimate diverges" : "r_hat = " + std::to_string(hypo.r_hat));
  res.summary = s.str();
  return res;
}

CommandResult cmd_check_maximal(const Json& spec, const RunConfig& cfg, const std::optional<std::string>& expect) {
  const OperatorPtr T = operator_from_json(spec);
  const Verdict verdict = maximality_decision(T, decision_config(cfg, T->dim, effective_kappa(spec, cfg)));
  CommandResult res;
  res.report["config"] = cfg.to_json();
  res.report["operator"] = variant_name(*T);
  const Json body = to_json(verdict);
  for (const auto& [key, val] : body.items()) res.report[key] = val;
  res.summary = verdict_name(verdict.kind) + ": " + verdict.reason;
  apply_expectation(res, verdict_name(verdict.kind), effective_expect(spec, expect));
  return res;
}

CommandResult cmd_check_convex(const Json& spec, const RunConfig& cfg, const std::optional<std::string>& expect) {
  const MaxQuadFunction f = function_from_json(spec);
  const Rational kappa = effective_kappa(spec, cfg);
  const ConvexityConfig ccfg = convexity_config(cfg, f.dim);
  const ConvexityVerdict verdict =
      sgn(kappa) > 0 ? strong_convexity_check(f, kappa, ccfg) : convexity_check_second_order(f, ccfg);
  CommandResult res;
  res.report["config"] = cfg.to_json();
  res.report["function"] = function_to_json(f);
  const Json body = to_json(verdict);
  for (const auto& [key, val] : body.items()) res.report[key] = val;
  const std::string name = convexity_kind_name(verdict.kind);
  res.summary = name + ": " + verdict.reason;
  if (verdict.primal_missing) res.summary += " (no primal witness within the search budget)";
  apply_expectation(res, name, effective_expect(spec, expect));
  return res;
}

CommandResult cmd_fixtures_list() {
  CommandResult res;
  Json list = Json::array();
  std::ostringstream s;
  for (const auto& fx : fixture_catalog()) {
    Json j;
    j["name"] = fx.name;
    j["analysis"] = fx.kind == FixtureKind::kMaximal ? "check-maximal" : "check-convex";
    j["expected"] = fx.expected;
    j["kappa"] = rational_to_json(fx.kappa);
    j["anchor"] = fx.anchor;
    list.push_back(std::move(j));
  }
  res.report["fixtures"] = std::move(list);
  res.summary = std::to_string(fixture_catalog().size()) + " fixtures";
  return res;
}

CommandResult cmd_fixtures_run(const std::optional<std::string>& name, const RunConfig& cfg) {
  std::vector<const Fixture*> selected;
  if (name) {
    const Fixture* fx = find_fixture(*name);
    if (!fx) throw Error(ErrorKind::kInvalidArgument, "unknown fixture '" + *name + "'");
    selected.push_back(fx);
  } else {
    for (const auto& fx : fixture_catalog()) selected.push_back(&fx);
  }
  CommandResult res;
  res.report["config"] = cfg.to_json();
  Json rows = Json::array();
  std::size_t failed = 0;
  for (const Fixture* fx : selected) {
    const Json spec = fixture_to_json(*fx);
    const CommandResult one =
        fx->kind == FixtureKind::kMaximal ? cmd_check_maximal(spec, cfg) : cmd_check_convex(spec, cfg);
    Json row;
    row["name"] = fx->name;
    row["expected"] = fx->expected;
    row["actual"] = one.report["verdict"];
    row["pass"] = one.exit_code == 0;
    if (one.exit_code != 0) ++failed;
    rows.push_back(std::move(row));
  }
  res.report["results"] = std::move(rows);
  res.report["failed"] = failed;
  res.summary = std::to_string(selected.size() - failed) + "/" + std::to_string(selected.size()) + " fixtures pass";
  res.exit_code = failed == 0 ? 0 : 1;
  return res;
}

CommandResult cmd_fixtures_export(const std::string& dir) {
  std::filesystem::create_directories(dir);
  CommandResult res;
  Json files = Json::array();
  for (const auto& fx : fixture_catalog()) {
    const std::string path = (std::filesystem::path(dir) / (fx.name + ".json")).string();
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path);
    out << fixture_to_json(fx).dump(2) << "\n";
    files.push_back(path);
  }
  res.report["written"] = std::move(files);
  res.summary = "wrote " + std::to_string(fixture_catalog().size()) + " fixture files to " + dir;
  return res;
}

}  // namespace monocone::cli
