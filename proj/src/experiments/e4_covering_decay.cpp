#include "common.hpp"

#include <cmath>

namespace gmt {

void run_e4_covering_decay(const ExperimentConfig& config, ExperimentReport& report) {
  const int nodes = static_cast<int>(config.integer("nodes"));
  const std::vector<double> ms = config.list("ms");
  const int j = static_cast<int>(config.integer("j"));
  const double slope_target = config.num("slope_target");
  const double slope_tol = config.num("slope_tol");
  constexpr int k = 2;
  const double h = 1.0 / (nodes - 1);

  // Rank-one map whose first coordinate is x1, read in the sup metric.
  const SampledMap f = SampledMap::sample(
      k, h, exp::cube_nodes(k, nodes),
      [](const VectorXd& x) { return exp::vec({x[0], 0.5 * x[0] * x[0], 0.0}); }, linf_metric());
  JetOptions jets;
  jets.min_fill = config.num("min_fill");
  const Stratification strata = stratify_critical(f, jets);
  report.metric("rank1_fraction", exp::rank_fraction(strata, j));
  report.metric("unresolved_points", static_cast<double>(strata.unresolved.size()));
  report.artifacts["stratification"] = to_json(strata);

  // C is fitted on the coarsest cover and then held fixed for every finer m.
  std::optional<double> constant;
  std::vector<double> contents;
  Table table{{"m", "balls", "radius", "content", "failures", "constant"}, {}};
  for (double mv : ms) {
    const int m = static_cast<int>(std::lround(mv));
    CriticalCoverOptions options;
    options.constant = constant;
    const CriticalCover cc = critical_cover(f, strata, j, m, options);
    if (!constant) {
      constant = cc.constant;
      report.metric("fitted_constant", cc.constant);
    }
    const std::string tag = "m" + std::to_string(m);
    const double balls = static_cast<double>(cc.cover.balls.size());
    const double expected = std::pow(static_cast<double>(m), j);
    const double content = cc.cover.content();
    contents.push_back(content);
    report.metric("balls_" + tag, balls);
    report.metric("failures_" + tag, static_cast<double>(cc.failures));
    report.metric("content_" + tag, content);
    report.check("ball_count_" + tag, balls, "==", {expected});
    report.check("all_covered_" + tag, static_cast<double>(cc.failures), "==", {0.0});
    table.rows.push_back({mv, balls, cc.cover.balls.front().radius, content, static_cast<double>(cc.failures),
                          cc.constant});
    if (m == static_cast<int>(std::lround(ms.back()))) report.artifacts["cover"] = to_json(cc.cover);
  }
  const double slope = loglog_fit(ms, contents).slope;
  report.metric("content_slope", slope);
  report.check("content_slope", slope, "in", {slope_target - slope_tol, slope_target + slope_tol});
  report.tables["covers"] = table;
  report.figures.push_back({"decay", "covers", "m", "content", "content_slope", "cover content against m"});
  report.metric("edge_d", 1.0);
  report.metric("lipschitz_L", f.lipschitz());
}

}  // namespace gmt
