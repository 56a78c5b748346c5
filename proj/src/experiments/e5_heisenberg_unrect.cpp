#include "common.hpp"

#include <cmath>
#include <numbers>

namespace gmt {

void run_e5_heisenberg_unrect(const ExperimentConfig& config, ExperimentReport& report) {
  const int nodes = static_cast<int>(config.integer("nodes"));
  const double h = 1.0 / (nodes - 1);
  const std::vector<double> radii = config.list("radii");
  const double s = config.num("s");
  JetOptions jets;
  jets.rank_tol = config.num("rank_tol");
  constexpr int n = 1;
  const double pi = std::numbers::pi;

  // Horizontal curves t' = 2(y x' - x y') composed with Lipschitz functions of (x1, x2).
  struct TestMap {
    std::string name;
    VectorMap f;
  };
  const std::vector<TestMap> maps = {
      {"line", [](const VectorXd& x) { return exp::vec({x[0], 0.0, 0.0}); }},
      {"helix", [pi](const VectorXd& x) {
         return exp::vec({std::cos(pi * x[0]), std::sin(pi * x[0]), -2 * pi * x[0]});
       }},
      {"helix_diagonal", [pi](const VectorXd& x) {
         const double a = 0.5 * pi * (x[0] + x[1]);
         return exp::vec({std::cos(a), std::sin(a), -2 * a});
       }},
  };

  const auto grid = exp::cube_nodes(2, nodes);
  int worst_rank = 0;
  for (const auto& map : maps) {
    const SampledMap f = SampledMap::sample(2, h, grid, map.f, koranyi_metric());
    const LowRankReport low = low_rank_check(f, jets);
    worst_rank = std::max(worst_rank, low.max_rank);
    report.metric("max_rank_" + map.name, low.max_rank);
    report.metric("unresolved_" + map.name, static_cast<double>(low.unresolved));
    report.check("rank_at_most_n_" + map.name, low.max_rank, "<=", {static_cast<double>(n)});

    const auto series = content_series(f.values(), koranyi_metric(), s, radii);
    const double slope = content_slope(series);
    report.metric("content_slope_" + map.name, slope);
    report.check("content_decays_" + map.name, slope, ">=", {config.num("content_slope_min")});
    report.tables["content_" + map.name] = exp::series_table(series);
    report.figures.push_back({"decay", "content_" + map.name, "r", "value", "content_slope_" + map.name,
                              "content of f(E), " + map.name});

    if (map.name == "helix_diagonal") {
      const Stratification strata = stratify_critical(f, jets);
      Table t{{"x1", "x2", "label"}, {}};
      for (std::size_t i = 0; i < f.size(); ++i) {
        const VectorXd p = f.point(i);
        t.rows.push_back({p[0], p[1], static_cast<double>(strata.labels[i])});
      }
      report.tables["strata"] = t;
      report.figures.push_back({"strata", "strata", "x1", "x2", "", "jet rank labels, helix_diagonal"});
      report.artifacts["stratification"] = to_json(strata);
    }
  }
  report.metric("max_rank", worst_rank);

  // (x, y, 0) is not horizontal: the Lipschitz ratio blows up like scale^-1/2.
  const int fine_nodes = static_cast<int>(config.integer("vertical_nodes"));
  const SampledMap v = SampledMap::sample(
      2, 1.0 / (fine_nodes - 1), exp::cube_nodes(2, fine_nodes),
      [](const VectorXd& x) { return exp::vec({x[0], x[1], 0.0}); }, koranyi_metric());
  const auto profile = h_lipschitz_profile(v, static_cast<int>(config.integer("profile_levels")));
  const double exponent = profile_slope(profile);
  Table pt{{"scale", "max_ratio"}, {}};
  for (const auto& row : profile) pt.rows.push_back({row.scale, row.max_ratio});
  report.tables["profile_nonhorizontal"] = pt;
  report.figures.push_back({"decay", "profile_nonhorizontal", "scale", "max_ratio", "blowup_exponent",
                            "Lipschitz ratio of (x, y, 0)"});
  report.metric("blowup_exponent", exponent);
  const double target = config.num("blowup_target");
  const double tol = config.num("blowup_tol");
  report.check("blowup_exponent", exponent, "in", {target - tol, target + tol});
  report.metric("rank_nonhorizontal", low_rank_check(v, jets).max_rank);
}

}  // namespace gmt
