#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monocone/coderivative.hpp"
#include "monocone/operator_json.hpp"

namespace monocone::cli {

struct RunConfig {
  std::uint64_t seed = 1;
  std::optional<std::pair<Rational, Rational>> region;  // box [lo, hi]^n
  std::optional<unsigned> density;
  std::vector<Rational> radii;  // empty: library default
  std::optional<Rational> shift_s;
  std::optional<Rational> kappa;
  CoderivativeKind kind = CoderivativeKind::kRegular;
  std::string out;

  Json to_json() const;
};

struct CommandResult {
  Json report;
  std::string summary;  // one line for stderr
  int exit_code = 0;
};

/// Comma-separated rationals such as "0,1/2,-3".
QVec parse_qvec_list(const std::string& text);
/// "lo,hi" with lo < hi.
std::pair<Rational, Rational> parse_region(const std::string& text);

SampleConfig sample_config(const RunConfig& cfg, std::size_t dim);

CommandResult cmd_coderivative(const Json& spec, const QVec& point, const QVec& w, const RunConfig& cfg);
CommandResult cmd_check_monotone(const Json& spec, const RunConfig& cfg);
CommandResult cmd_check_maximal(const Json& spec, const RunConfig& cfg,
                                const std::optional<std::string>& expect = std::nullopt);
CommandResult cmd_check_convex(const Json& spec, const RunConfig& cfg,
                               const std::optional<std::string>& expect = std::nullopt);

CommandResult cmd_fixtures_list();
CommandResult cmd_fixtures_run(const std::optional<std::string>& name, const RunConfig& cfg);
/// Writes <dir>/<name>.json for every fixture.
CommandResult cmd_fixtures_export(const std::string& dir);

}  // namespace monocone::cli
