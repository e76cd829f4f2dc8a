#include <gtest/gtest.h>

#include <filesystem>

#include "cli/commands.hpp"
#include "cli/fixtures.hpp"
#include "monocone/error.hpp"

namespace monocone::cli {
namespace {

const std::filesystem::path kFixtureDir = MONOCONE_FIXTURE_DIR;

Json load(const std::string& name) { return read_json_file((kFixtureDir / (name + ".json")).string()); }

TEST(FixtureFilesTest, MatchCatalog) {
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kFixtureDir)) {
    if (entry.path().extension() == ".json") ++files;
  }
  EXPECT_EQ(files, fixture_catalog().size());
  for (const auto& fx : fixture_catalog()) EXPECT_EQ(load(fx.name), fixture_to_json(fx)) << fx.name;
}

TEST(FixtureFilesTest, FunctionCatalogShape) {
  std::size_t convex = 0;
  for (const auto& entry : function_catalog()) convex += entry.convex ? 1 : 0;
  EXPECT_EQ(function_catalog().size(), 20u);
  EXPECT_EQ(convex, 10u);
}

TEST(CommandsTest, AbsvalIsMaximal) {
  const CommandResult r = cmd_check_maximal(load("absval-subdiff"), RunConfig{});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.report["verdict"], "MaximalMonotone");
  EXPECT_EQ(r.report["route"], "global");
  EXPECT_EQ(r.report["matches_expected"], true);
}

TEST(CommandsTest, StripIsNotMonotone) {
  const CommandResult r = cmd_check_maximal(load("kx-box"), RunConfig{});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.report["verdict"], "NotMonotone");
  ASSERT_TRUE(r.report["witness_pair"].is_array());
  EXPECT_EQ(r.report["witness_pair"].size(), 2u);
}

TEST(CommandsTest, RefutedExpectation) {
  const CommandResult r = cmd_check_maximal(load("kx-box"), RunConfig{}, std::string("MaximalMonotone"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.report["matches_expected"], false);
}

TEST(CommandsTest, CoderivativeValue) {
  const CommandResult r = cmd_coderivative(load("kx-box"), {0, Rational(1, 2)}, {0}, RunConfig{});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.report["value"]["type"], "points");
  EXPECT_EQ(r.report["value"]["points"], Json::parse("[[0]]"));
  EXPECT_EQ(r.report["exactness"], "exact");
}

TEST(CommandsTest, CoderivativeDimensionMismatch) {
  try {
    cmd_coderivative(load("kx-box"), {0}, {0}, RunConfig{});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDimensionMismatch);
  }
}

TEST(CommandsTest, ConvexityAndKappaFromMetadata) {
  const CommandResult strong = cmd_check_convex(load("strong-diag"), RunConfig{});
  EXPECT_EQ(strong.report["verdict"], "StronglyConvex");
  EXPECT_EQ(strong.exit_code, 0);

  RunConfig cfg;
  cfg.kappa = Rational(5, 2);
  const CommandResult weaker = cmd_check_convex(load("strong-diag"), cfg, std::string("NotStronglyConvex"));
  EXPECT_EQ(weaker.report["verdict"], "NotStronglyConvex");
  EXPECT_EQ(weaker.exit_code, 0);

  const CommandResult concave = cmd_check_convex(load("concave-square"), RunConfig{});
  EXPECT_EQ(concave.report["verdict"], "NotConvex");
  EXPECT_FALSE(concave.report["primal_witness"].is_null());
}

TEST(CommandsTest, ReportsAreDeterministic) {
  RunConfig cfg;
  cfg.seed = 17;
  for (const char* name : {"inv-neg", "absval-subdiff"}) {
    EXPECT_EQ(cmd_check_maximal(load(name), cfg).report.dump(2), cmd_check_maximal(load(name), cfg).report.dump(2));
  }
  EXPECT_EQ(cmd_check_monotone(load("kx-box"), cfg).report.dump(2),
            cmd_check_monotone(load("kx-box"), cfg).report.dump(2));
  EXPECT_EQ(cmd_check_convex(load("concave-square"), cfg).report.dump(2),
            cmd_check_convex(load("concave-square"), cfg).report.dump(2));
}

TEST(CommandsTest, ConfigIsEchoed) {
  RunConfig cfg;
  cfg.seed = 3;
  cfg.region = parse_region("-1,1");
  cfg.density = 5;
  const CommandResult r = cmd_check_monotone(load("identity"), cfg);
  EXPECT_EQ(r.report["config"]["seed"], 3);
  EXPECT_EQ(r.report["config"]["density"], 5);
  EXPECT_EQ(r.report["samples"], 5);
  EXPECT_EQ(r.report["pairwise"]["monotone"], true);
}

TEST(CommandsTest, ParsingErrors) {
  EXPECT_THROW(parse_region("1,1"), Error);
  EXPECT_THROW(parse_region("0"), Error);
  EXPECT_THROW(parse_qvec_list(""), Error);
  EXPECT_EQ(parse_qvec_list("1/2,-3"), (QVec{Rational(1, 2), -3}));
  EXPECT_THROW(cmd_check_maximal(Json::parse(R"({"variant": "rational_map", "dim": 1})"), RunConfig{}), Error);
}

TEST(CommandsTest, SingleFixtureRun) {
  const CommandResult r = cmd_fixtures_run(std::string("neg-identity"), RunConfig{});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.report["results"][0]["actual"], "NotMonotone");
  EXPECT_THROW(cmd_fixtures_run(std::string("nope"), RunConfig{}), Error);
}

}  // namespace
}  // namespace monocone::cli
