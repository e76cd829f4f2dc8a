// monocone: coderivative queries and monotonicity / convexity checks from JSON specs.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "monocone/error.hpp"

namespace {

using monocone::cli::CommandResult;
using monocone::cli::RunConfig;

int emit(const CommandResult& res, const RunConfig& cfg) {
  const std::string body = res.report.dump(2);
  if (cfg.out.empty()) {
    std::cout << body << "\n";
  } else {
    std::ofstream out(cfg.out);
    if (!out) {
      std::cerr << "error: cannot write " << cfg.out << "\n";
      return 2;
    }
    out << body << "\n";
  }
  std::cerr << res.summary << "\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coderivatives, maximal monotonicity and convexity checks"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string region, kappa, shift_s, kind = "regular", radii;
  std::optional<unsigned> density;
  std::optional<std::string> expect;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--region", region, "Sampling box as lo,hi");
    sub->add_option("--density", density, "Grid points per axis");
    sub->add_option("--kappa", kappa, "Strong monotonicity / convexity modulus");
    sub->add_option("--shift-s", shift_s, "Resolvent shift s");
    sub->add_option("--radii", radii, "Window radii as r1,r2,...");
    sub->add_option("--kind", kind, "regular or limiting")->check(CLI::IsMember({"regular", "limiting"}));
    sub->add_option("--out", cfg.out, "Write the JSON report here instead of stdout");
  };

  std::string spec_path, point, dir;
  auto* coderiv = app.add_subcommand("coderivative", "Coderivative value at a graph point");
  coderiv->add_option("spec", spec_path, "Operator JSON")->required();
  coderiv->add_option("--point", point, "u then v, comma separated")->required();
  coderiv->add_option("--dir", dir, "Direction w, comma separated")->required();
  add_common(coderiv);

  auto* monotone = app.add_subcommand("check-monotone", "Pairwise and hypomonotonicity estimates");
  monotone->add_option("spec", spec_path, "Operator JSON")->required();
  add_common(monotone);

  auto* maximal = app.add_subcommand("check-maximal", "Maximal monotonicity decision");
  maximal->add_option("spec", spec_path, "Operator JSON")->required();
  maximal->add_option("--expect", expect, "Expected verdict (overrides the fixture metadata)");
  add_common(maximal);

  auto* convex = app.add_subcommand("check-convex", "Convexity via second-order values");
  convex->add_option("spec", spec_path, "Function JSON")->required();
  convex->add_option("--expect", expect, "Expected verdict (overrides the fixture metadata)");
  add_common(convex);

  std::string action, fixture_name, export_dir = "fixtures";
  auto* fixtures = app.add_subcommand("fixtures", "List, run or export the fixture catalog");
  fixtures->add_option("action", action, "list, run or export")
      ->required()
      ->check(CLI::IsMember({"list", "run", "export"}));
  fixtures->add_option("name", fixture_name, "Fixture to run");
  fixtures->add_option("--dir", export_dir, "Export directory");
  add_common(fixtures);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!region.empty()) cfg.region = monocone::cli::parse_region(region);
    cfg.density = density;
    if (!kappa.empty()) cfg.kappa = monocone::parse_rational(kappa);
    if (!shift_s.empty()) cfg.shift_s = monocone::parse_rational(shift_s);
    if (!radii.empty()) cfg.radii = monocone::cli::parse_qvec_list(radii);
    cfg.kind = monocone::parse_kind(kind);

    if (*coderiv) {
      return emit(monocone::cli::cmd_coderivative(monocone::read_json_file(spec_path),
                                                  monocone::cli::parse_qvec_list(point),
                                                  monocone::cli::parse_qvec_list(dir), cfg),
                  cfg);
    }
    if (*monotone) return emit(monocone::cli::cmd_check_monotone(monocone::read_json_file(spec_path), cfg), cfg);
    if (*maximal) return emit(monocone::cli::cmd_check_maximal(monocone::read_json_file(spec_path), cfg, expect), cfg);
    if (*convex) return emit(monocone::cli::cmd_check_convex(monocone::read_json_file(spec_path), cfg, expect), cfg);
    if (action == "list") return emit(monocone::cli::cmd_fixtures_list(), cfg);
    if (action == "export") return emit(monocone::cli::cmd_fixtures_export(export_dir), cfg);
    std::optional<std::string> name;
    if (!fixture_name.empty()) name = fixture_name;
    return emit(monocone::cli::cmd_fixtures_run(name, cfg), cfg);
  } catch (const monocone::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
