#include "gmt/harness.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

using namespace gmt;
namespace fs = std::filesystem;

namespace {

ExperimentReport tiny_report() {
  ExperimentReport r;
  r.id = "E8_area_formula";
  r.anchor = "area-formula";
  r.seed = 8;
  r.metric("a", 1.5);
  r.metric("b", 2.0, "other-claim");
  r.metric("c", 0.25);
  r.check("a_small", 1.5, "<", {2.0});
  r.tables["t"] = Table{{"x", "y"}, {{1, 2}, {3, 4}}};
  r.figures.push_back({"decay", "t", "x", "y", "", "title"});
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Report, VerdictRelations) {
  ExperimentReport r;
  EXPECT_TRUE(r.check("lt", 1, "<", {2}));
  EXPECT_FALSE(r.check("le", 3, "<=", {2}));
  EXPECT_TRUE(r.check("in", 0.5, "in", {0.4, 0.6}));
  EXPECT_FALSE(r.check("in_out", 0.7, "in", {0.4, 0.6}));
  EXPECT_FALSE(r.check("nan", std::nan(""), ">", {0}));
  EXPECT_TRUE(r.check("eq", 1, "==", {1}));
  EXPECT_FALSE(r.passed());
  EXPECT_THROW(r.check("bad", 1, "~", {1}), Error);
  EXPECT_THROW(r.check("in_arity", 1, "in", {1}), Error);
}

TEST(Report, AnchorsDefaultToExperiment) {
  const ExperimentReport r = tiny_report();
  EXPECT_EQ(r.find_metric("a")->anchor, "area-formula");
  EXPECT_EQ(r.find_metric("b")->anchor, "other-claim");
  EXPECT_EQ(r.find_metric("missing"), nullptr);
}

TEST(Emit, JsonOnlyWritesOneFile) {
  const fs::path dir = fresh_dir("gmt_emit_json");
  const auto written = emit_report(tiny_report(), {ReportFormat::json}, dir);
  ASSERT_EQ(written.size(), 1u);
  const Json j = Json::parse(slurp(dir / "report.json"));
  EXPECT_EQ(j.at("schema_version"), kReportSchemaVersion);
  EXPECT_EQ(j.at("metrics").size(), 3u);
  EXPECT_EQ(j.at("verdicts").at(0).at("relation"), "<");
  EXPECT_EQ(j.at("tables").at("t").at("columns").size(), 2u);
  EXPECT_TRUE(j.at("passed").get<bool>());
  fs::remove_all(dir);
}

TEST(Emit, JsonAndCsvRowsMatchMetrics) {
  const fs::path dir = fresh_dir("gmt_emit_csv");
  const auto written = emit_report(tiny_report(), {ReportFormat::json, ReportFormat::csv}, dir);
  ASSERT_EQ(written.size(), 2u);
  std::istringstream csv(slurp(dir / "metrics.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "name,value,anchor");
  int rows = 0;
  while (std::getline(csv, line)) {
    if (!line.empty()) ++rows;
  }
  EXPECT_EQ(rows, 3);
  fs::remove_all(dir);
}

TEST(Emit, ManifestListsFiguresAndTables) {
  const fs::path dir = fresh_dir("gmt_emit_manifest");
  emit_report(tiny_report(), {ReportFormat::json, ReportFormat::csv, ReportFormat::manifest}, dir);
  const Json m = Json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(m.at("report"), "report.json");
  ASSERT_EQ(m.at("figures").size(), 1u);
  const std::string csv = m.at("figures").at(0).at("csv");
  EXPECT_TRUE(fs::exists(dir / csv));
  EXPECT_EQ(slurp(dir / csv).substr(0, 4), "x,y\n");
  fs::remove_all(dir);
}

TEST(Emit, RefusesEmptyReports) {
  ExperimentReport r;
  r.id = "E8_area_formula";
  try {
    emit_report(r, {ReportFormat::json}, fresh_dir("gmt_emit_empty"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::contract_violation);
  }
  r.metric("x", 1);
  EXPECT_THROW(emit_report(r, {ReportFormat::json}, fresh_dir("gmt_emit_empty")), Error);
  EXPECT_THROW(emit_report(tiny_report(), {}, fresh_dir("gmt_emit_empty")), Error);
}

TEST(Registry, NineExperimentsWithDistinctSeeds) {
  const auto& reg = experiment_registry();
  ASSERT_EQ(reg.size(), 9u);
  for (std::size_t i = 0; i < reg.size(); ++i) {
    EXPECT_EQ(reg[i].default_seed, i + 1);
    EXPECT_FALSE(reg[i].anchor.empty());
    EXPECT_EQ(find_experiment(reg[i].id), &reg[i]);
  }
  EXPECT_EQ(find_experiment("E0_nothing"), nullptr);
}

TEST(Config, MergeOrderAndSeeds) {
  const auto toml = parse_toml(
      "seed = 40\nmax_gap = 0.5\nunrelated = 3\n[E8_area_formula]\nspacings = [0.02]\nseed = 41\n");
  const ExperimentConfig c = make_config("E8_area_formula", toml, std::nullopt, "out");
  EXPECT_EQ(c.seed, 41u);
  EXPECT_DOUBLE_EQ(c.num("max_gap"), 0.5);
  EXPECT_EQ(c.list("spacings"), std::vector<double>{0.02});
  EXPECT_EQ(c.params.count("unrelated"), 0u);
  EXPECT_EQ(make_config("E8_area_formula", toml, 99, "out").seed, 99u);
  EXPECT_EQ(make_config("E8_area_formula", {}, std::nullopt, "out").seed, 8u);
}

TEST(Config, UsageErrors) {
  try {
    make_config("E42_unknown", {}, std::nullopt, "out");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::usage);
  }
  try {
    make_config("E8_area_formula", parse_toml("[E8_area_formula]\nmax_gapp = 1.0\n"), std::nullopt, "out");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::usage);
  }
}

TEST(Run, DeterministicApartFromTiming) {
  const auto toml = parse_toml("[E9_straightening]\ntest_points = 30\n");
  const ExperimentConfig c = make_config("E9_straightening", toml, 5, "out");
  const ExperimentReport a = run_experiment(c);
  const ExperimentReport b = run_experiment(c);
  EXPECT_TRUE(a.passed());
  EXPECT_EQ(a.to_json(false).dump(), b.to_json(false).dump());
  EXPECT_TRUE(a.to_json(true).contains("timing"));
  EXPECT_FALSE(a.to_json(false).contains("timing"));
}

TEST(Run, FailureInsideExperimentIsReported) {
  // Five nodes per axis leave too many unresolved jets for the cover.
  const auto toml = parse_toml("[E4_covering_decay]\nnodes = 5\n");
  const ExperimentReport r = run_experiment(make_config("E4_covering_decay", toml, std::nullopt, "out"));
  EXPECT_FALSE(r.passed());
  ASSERT_FALSE(r.notes.empty());
  EXPECT_EQ(r.notes.back().rfind("aborted: ", 0), 0u);
}
