#pragma once

#include "gmt/config.hpp"
#include "gmt/io.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gmt {

inline constexpr int kReportSchemaVersion = 1;

struct ExperimentConfig {
  std::string id;
  ParamMap params;
  std::uint64_t seed = 0;
  std::string output_dir;

  double num(const std::string& key) const { return param_double(params, key); }
  std::int64_t integer(const std::string& key) const { return param_int(params, key); }
  std::vector<double> list(const std::string& key) const { return param_list(params, key); }
  std::string text(const std::string& key) const { return param_string(params, key); }
  bool flag(const std::string& key) const { return param_bool(params, key); }
};

struct MetricEntry {
  std::string name;
  double value = 0;
  std::string anchor;
};

struct Verdict {
  std::string name;
  bool passed = false;
  double measured = 0;
  std::string relation;  // e.g. "<", ">=", "in"
  std::vector<double> threshold;
  std::string anchor;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Figure the plotting component should render from a table of this report.
struct FigureSpec {
  std::string kind;  // decay, histogram, strata, path3d
  std::string table;
  std::string x;
  std::string y;
  std::string slope_metric;  // optional metric the decay annotation must reproduce
  std::string title;
};

struct ExperimentReport {
  std::string id;
  std::string anchor;
  ParamMap config;
  std::uint64_t seed = 0;
  std::vector<MetricEntry> metrics;
  std::vector<Verdict> verdicts;
  std::map<std::string, Table> tables;
  std::vector<FigureSpec> figures;
  std::map<std::string, std::string> conventions;
  std::map<std::string, Json> artifacts;  // serialized module objects
  std::vector<std::string> notes;
  double runtime_seconds = 0;
  std::string timestamp;

  bool passed() const;
  void metric(const std::string& name, double value, const std::string& anchor = "");
  /// Records measured `relation` threshold as a verdict and returns whether it holds.
  bool check(const std::string& name, double measured, const std::string& relation,
             std::vector<double> threshold, const std::string& anchor = "");
  const MetricEntry* find_metric(const std::string& name) const;

  /// Whole report; the "timing" object is left out when include_timing is false.
  Json to_json(bool include_timing = true) const;
};

enum class ReportFormat { json, csv, manifest };

/// report.json, metrics.csv (one row per metric), manifest.json plus tables/<name>.csv.
/// Returns the written paths. Refuses reports without metrics or verdicts.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::vector<ReportFormat>& formats,
                                               const std::filesystem::path& dir);

using ExperimentFn = std::function<void(const ExperimentConfig&, ExperimentReport&)>;

struct ExperimentInfo {
  std::string id;
  std::string anchor;
  std::string summary;
  ParamMap defaults;
  std::uint64_t default_seed = 0;
  ExperimentFn run;
};

const std::vector<ExperimentInfo>& experiment_registry();
const ExperimentInfo* find_experiment(const std::string& id);

/// Defaults, then top-level TOML keys the experiment knows, then its [id] table. Unknown keys
/// in the [id] table are a usage error.
ExperimentConfig make_config(const std::string& id, const std::map<std::string, ParamMap>& toml,
                             std::optional<std::uint64_t> seed, const std::string& output_dir);

ExperimentReport run_experiment(const ExperimentConfig& config);

// Experiment bodies, one per registered id.
void run_e1_equivalence(const ExperimentConfig& config, ExperimentReport& report);
void run_e2_diameter(const ExperimentConfig& config, ExperimentReport& report);
void run_e3_si_majority(const ExperimentConfig& config, ExperimentReport& report);
void run_e4_covering_decay(const ExperimentConfig& config, ExperimentReport& report);
void run_e5_heisenberg_unrect(const ExperimentConfig& config, ExperimentReport& report);
void run_e6_bld_jacobian(const ExperimentConfig& config, ExperimentReport& report);
void run_e7_taxis_length(const ExperimentConfig& config, ExperimentReport& report);
void run_e8_area_formula(const ExperimentConfig& config, ExperimentReport& report);
void run_e9_straightening(const ExperimentConfig& config, ExperimentReport& report);

}  // namespace gmt
