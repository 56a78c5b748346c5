#include "gmt/harness.hpp"

#include <CLI11.hpp>

#include <future>
#include <iostream>

namespace {

struct Outcome {
  std::string id;
  bool passed = false;
  double seconds = 0;
  std::filesystem::path dir;
};

Outcome run_one(const std::string& id, const std::map<std::string, gmt::ParamMap>& toml,
                std::optional<std::uint64_t> seed, const std::filesystem::path& out) {
  const gmt::ExperimentConfig config = gmt::make_config(id, toml, seed, (out / id).string());
  const gmt::ExperimentReport report = gmt::run_experiment(config);
  gmt::emit_report(report, {gmt::ReportFormat::json, gmt::ReportFormat::csv, gmt::ReportFormat::manifest},
                   config.output_dir);
  return {id, report.passed(), report.runtime_seconds, config.output_dir};
}

int run(const std::string& target, const std::string& config_path, const std::string& out,
        std::optional<std::uint64_t> seed, bool parallel) {
  const auto toml = gmt::parse_toml_file(config_path);
  std::vector<std::string> ids;
  if (target == "all") {
    for (const auto& e : gmt::experiment_registry()) ids.push_back(e.id);
  } else {
    if (!gmt::find_experiment(target)) throw gmt::Error(gmt::ErrorKind::usage, "unknown experiment '" + target + "'");
    ids.push_back(target);
  }

  std::vector<Outcome> outcomes;
  if (parallel && ids.size() > 1) {
    std::vector<std::future<Outcome>> jobs;
    for (const auto& id : ids) jobs.push_back(std::async(std::launch::async, run_one, id, toml, seed, out));
    for (auto& job : jobs) outcomes.push_back(job.get());
  } else {
    for (const auto& id : ids) outcomes.push_back(run_one(id, toml, seed, out));
  }

  bool all = true;
  for (const auto& o : outcomes) {
    std::cout << (o.passed ? "PASS " : "FAIL ") << o.id << "  (" << o.seconds << " s)  " << o.dir.string() << '\n';
    all = all && o.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gmt-rect: seeded experiments on rectifiability in metric targets"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "print registered experiments and the claims they test");
  auto* run_cmd = app.add_subcommand("run", "run one experiment (or 'all') and write its reports");
  std::string id, config_path, out;
  std::optional<std::uint64_t> seed;
  bool parallel = false;
  run_cmd->add_option("experiment", id, "experiment id, or 'all'")->required();
  run_cmd->add_option("--config", config_path, "TOML configuration")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out, "output directory; reports go to <out>/<id>/")->required();
  run_cmd->add_option("--seed", seed, "root seed overriding the config");
  run_cmd->add_flag("--parallel", parallel, "run independent experiments concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& e : gmt::experiment_registry()) {
        std::cout << e.id << "\t" << e.anchor << "\t" << e.summary << '\n';
      }
      return 0;
    }
    return run(id, config_path, out, seed, parallel);
  } catch (const gmt::Error& e) {
    std::cerr << "gmt-rect: " << e.what() << '\n';
    return 2;
  }
}
