#include "gmt/harness.hpp"

#include "gmt/heisenberg.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

namespace gmt {

namespace {

Json param_json(const ParamValue& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string table_csv(const Table& t) {
  std::ostringstream out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_number(row[c]);
    out << '\n';
  }
  return out.str();
}

bool holds(double measured, const std::string& relation, const std::vector<double>& t) {
  auto arg = [&](std::size_t n) {
    require(t.size() == n, "check: relation '" + relation + "' needs " + std::to_string(n) + " threshold(s)");
    return t[0];
  };
  if (relation == "<") return measured < arg(1);
  if (relation == "<=") return measured <= arg(1);
  if (relation == ">") return measured > arg(1);
  if (relation == ">=") return measured >= arg(1);
  if (relation == "==") return measured == arg(1);
  if (relation == "in") {
    arg(2);
    return measured >= t[0] && measured <= t[1];
  }
  throw Error(ErrorKind::contract_violation, "check: unknown relation '" + relation + "'");
}

ParamMap params(std::initializer_list<std::pair<const std::string, ParamValue>> init) { return ParamMap(init); }

using L = std::vector<double>;
using I = std::int64_t;

}  // namespace

bool ExperimentReport::passed() const {
  if (verdicts.empty()) return false;
  for (const auto& v : verdicts) {
    if (!v.passed) return false;
  }
  return true;
}

void ExperimentReport::metric(const std::string& name, double value, const std::string& tag) {
  metrics.push_back({name, value, tag.empty() ? anchor : tag});
}

bool ExperimentReport::check(const std::string& name, double measured, const std::string& relation,
                             std::vector<double> threshold, const std::string& tag) {
  // NaN fails every relation.
  const bool ok = !std::isnan(measured) && holds(measured, relation, threshold);
  verdicts.push_back({name, ok, measured, relation, std::move(threshold), tag.empty() ? anchor : tag});
  return ok;
}

const MetricEntry* ExperimentReport::find_metric(const std::string& name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

Json ExperimentReport::to_json(bool include_timing) const {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["id"] = id;
  j["anchor"] = anchor;
  j["seed"] = seed;
  j["passed"] = passed();
  Json cfg = Json::object();
  for (const auto& [k, v] : config) cfg[k] = param_json(v);
  j["config"] = cfg;
  j["conventions"] = conventions;
  Json ms = Json::array();
  for (const auto& m : metrics) ms.push_back({{"name", m.name}, {"value", m.value}, {"anchor", m.anchor}});
  j["metrics"] = ms;
  Json vs = Json::array();
  for (const auto& v : verdicts) {
    vs.push_back({{"name", v.name},
                  {"passed", v.passed},
                  {"measured", v.measured},
                  {"relation", v.relation},
                  {"threshold", v.threshold},
                  {"anchor", v.anchor}});
  }
  j["verdicts"] = vs;
  Json ts = Json::object();
  for (const auto& [name, t] : tables) ts[name] = {{"columns", t.columns}, {"rows", t.rows}};
  j["tables"] = ts;
  Json fs = Json::array();
  for (const auto& f : figures) {
    fs.push_back({{"kind", f.kind}, {"table", f.table}, {"x", f.x}, {"y", f.y},
                  {"slope_metric", f.slope_metric}, {"title", f.title}});
  }
  j["figures"] = fs;
  j["artifacts"] = artifacts;
  j["notes"] = notes;
  if (include_timing) j["timing"] = {{"runtime_seconds", runtime_seconds}, {"timestamp", timestamp}};
  return j;
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::vector<ReportFormat>& formats,
                                               const std::filesystem::path& dir) {
  require(!report.metrics.empty() && !report.verdicts.empty(), "emit_report: report has no metrics or verdicts");
  require(!formats.empty(), "emit_report: no formats requested");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  std::set<ReportFormat> done;
  for (ReportFormat format : formats) {
    if (!done.insert(format).second) continue;
    switch (format) {
      case ReportFormat::json: {
        const auto path = dir / "report.json";
        write_text(path.string(), report.to_json().dump(2) + "\n");
        written.push_back(path);
        break;
      }
      case ReportFormat::csv: {
        std::ostringstream out;
        out << "name,value,anchor\n";
        for (const auto& m : report.metrics) out << m.name << ',' << csv_number(m.value) << ',' << m.anchor << '\n';
        const auto path = dir / "metrics.csv";
        write_text(path.string(), out.str());
        written.push_back(path);
        break;
      }
      case ReportFormat::manifest: {
        std::filesystem::create_directories(dir / "tables", ec);
        if (ec) throw Error(ErrorKind::io, "cannot create " + (dir / "tables").string());
        for (const auto& [name, table] : report.tables) {
          const auto path = dir / "tables" / (name + ".csv");
          write_text(path.string(), table_csv(table));
          written.push_back(path);
        }
        Json figures = Json::array();
        for (const auto& f : report.figures) {
          Json entry = {{"kind", f.kind},   {"table", f.table}, {"csv", "tables/" + f.table + ".csv"},
                        {"x", f.x},         {"y", f.y},         {"title", f.title},
                        {"slope_metric", f.slope_metric}};
          if (const MetricEntry* m = f.slope_metric.empty() ? nullptr : report.find_metric(f.slope_metric)) {
            entry["slope_value"] = m->value;
          }
          figures.push_back(entry);
        }
        const Json manifest = {{"schema_version", kReportSchemaVersion},
                               {"id", report.id},
                               {"report", "report.json"},
                               {"figures", figures}};
        const auto path = dir / "manifest.json";
        write_text(path.string(), manifest.dump(2) + "\n");
        written.push_back(path);
        break;
      }
    }
  }
  return written;
}

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> registry = {
      {"E1_equivalence", "equivalence-of-null-image-conditions",
       "rank-one maps into R^3 and H^1: content decay, landmark ranks, Kuratowski image",
       params({{"n1", I{401}}, {"n2", I{9}}, {"h", 0.0025}, {"radii", L{0.02, 0.04, 0.08, 0.16}}, {"s", 2.0},
               {"slope_target", 1.0}, {"slope_tol", 0.3}, {"rank_fraction_min", 0.99}, {"rank_tol", 1e-4},
               {"rank_tols", L{1e-8, 1e-6, 1e-4, 1e-2}}, {"landmark_sets", I{3}}, {"kuratowski_landmarks", I{8}},
               {"control_nodes", I{41}}, {"control_slope_max", 0.5}, {"control_rank2_min", 0.9}}),
       1, run_e1_equivalence},
      {"E2_diameter", "diameter-bound-by-measure-of-noncritical-set",
       "cone maps on [0,1]^k: diameter of the image against the measure where the gradient lives",
       params({{"widths", L{0.1, 0.15, 0.2, 0.3, 0.4}}, {"lipschitz", 1.0}, {"grad_tol", 0.5},
               {"exponent_tol", 0.1}, {"h1", 0.001}, {"h2", 0.005}, {"poincare_h", 0.05}}),
       2, run_e2_diameter},
      {"E3_si_majority", "segment-intersection-majority",
       "random small sets E in the unit square: most segments from x meet E briefly",
       params({{"instances", I{100}}, {"samples", I{400}}, {"cells", I{100}}, {"max_measure", 0.1},
               {"min_fraction", 0.5}, {"riesz_slack", 0.02}, {"disk_every", I{10}}}),
       3, run_e3_si_majority},
      {"E4_covering_decay", "critical-set-covering-by-m^j-balls",
       "rank-one map on the unit square: m^j balls cover the image of K_j",
       params({{"nodes", I{161}}, {"ms", L{2, 4, 8, 16}}, {"j", I{1}}, {"min_fill", 0.3},
               {"slope_target", -1.0}, {"slope_tol", 0.3}}),
       4, run_e4_covering_decay},
      {"E5_heisenberg_unrect", "low-rank-of-lipschitz-maps-into-heisenberg",
       "Lipschitz maps into H^1 have rank at most 1; (x, y, 0) is not Lipschitz",
       params({{"nodes", I{101}}, {"radii", L{0.04, 0.08, 0.16, 0.32}}, {"s", 2.0}, {"rank_tol", 1e-4},
               {"content_slope_min", 0.7}, {"vertical_nodes", I{201}}, {"profile_levels", I{5}},
               {"blowup_target", -0.5}, {"blowup_tol", 0.1}}),
       5, run_e5_heisenberg_unrect},
      {"E6_bld_jacobian", "weak-bld-implies-jacobian-lower-bound",
       "identity, rotation and scaling are weak BLD with |J| bounded below; (x1, 0) is not",
       params({{"curves", I{50}}, {"nodes", I{41}}, {"bld_bound", 2.0}, {"jacobian_slack", 1e-6},
               {"jacobian_fraction_min", 0.99}, {"collapse_ratio_max", 1e-9}}),
       6, run_e6_bld_jacobian},
      {"E7_taxis_length", "vertical-segments-have-infinite-cc-length",
       "chord sums of the t-axis segment grow like sqrt(N)",
       params({{"tau", 1.0}, {"refinements", L{8, 16, 32, 64, 128, 256, 512}}, {"segments", I{32}},
               {"restarts", I{2}}, {"slope_target", 0.5}, {"slope_tol", 0.1}, {"excess_factor", 10.0},
               {"tau_scan", L{0.125, 0.25, 0.5, 1.0}}, {"tau_exponent_tol", 0.05}, {"general_segments", I{16}},
               {"general_tol", 0.05}}),
       7, run_e7_taxis_length},
      {"E8_area_formula", "area-formula-with-multiplicity",
       "both sides of the area formula for a linear map, a fold and a diffeomorphism",
       params({{"spacings", L{0.01, 0.005}}, {"max_gap", 0.01}}), 8, run_e8_area_formula},
      {"E9_straightening", "straightening-fixes-first-j-coordinates",
       "local change of variables fixing the first j coordinates of g",
       params({{"tolerance", 1e-9}, {"test_points", I{25}}, {"max_residual", 1e-8}}), 9, run_e9_straightening},
  };
  return registry;
}

const ExperimentInfo* find_experiment(const std::string& id) {
  for (const auto& e : experiment_registry()) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

ExperimentConfig make_config(const std::string& id, const std::map<std::string, ParamMap>& toml,
                             std::optional<std::uint64_t> seed, const std::string& output_dir) {
  const ExperimentInfo* info = find_experiment(id);
  if (!info) throw Error(ErrorKind::usage, "unknown experiment '" + id + "'");
  ExperimentConfig config;
  config.id = id;
  config.params = info->defaults;
  config.seed = info->default_seed;
  config.output_dir = output_dir;

  auto take_seed = [&](const ParamMap& p) {
    if (p.count("seed")) {
      const std::int64_t s = param_int(p, "seed");
      if (s < 0) throw Error(ErrorKind::usage, "seed must be non-negative");
      config.seed = static_cast<std::uint64_t>(s);
    }
  };
  if (auto top = toml.find(""); top != toml.end()) {
    take_seed(top->second);
    for (const auto& [k, v] : top->second) {
      if (config.params.count(k)) config.params[k] = v;
    }
  }
  if (auto table = toml.find(id); table != toml.end()) {
    take_seed(table->second);
    for (const auto& [k, v] : table->second) {
      if (k == "seed") continue;
      if (!config.params.count(k)) throw Error(ErrorKind::usage, "[" + id + "]: unknown key '" + k + "'");
      config.params[k] = v;
    }
  }
  if (seed) config.seed = *seed;
  return config;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const ExperimentInfo* info = find_experiment(config.id);
  if (!info) throw Error(ErrorKind::usage, "unknown experiment '" + config.id + "'");
  ExperimentReport report;
  report.id = config.id;
  report.anchor = info->anchor;
  report.config = config.params;
  report.seed = config.seed;
  report.conventions = {{"group_law", kGroupLaw}, {"gauge", kGauge}, {"frame", kFrame}};
  const auto start = std::chrono::steady_clock::now();
  try {
    info->run(config, report);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::usage) throw;
    report.notes.push_back(std::string("aborted: ") + e.what());
    report.metric("completed", 0.0);
    report.check("ran_to_completion", 0.0, "==", {1.0});
  }
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.timestamp = utc_now();
  return report;
}

}  // namespace gmt
