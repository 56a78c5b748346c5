#include "common.hpp"

#include <cmath>

namespace gmt {

namespace {

struct AreaMap {
  std::string name;
  int k;
  VectorMap g;
  JacobianMap jacobian;
  double exact_lhs;
};

std::vector<AreaMap> built_in_maps() {
  return {
      {"double", 2, [](const VectorXd& x) { return VectorXd(2 * x); },
       [](const VectorXd&) { return MatrixXd(2 * MatrixXd::Identity(2, 2)); }, 4.0},
      {"fold", 1, [](const VectorXd& x) { return exp::vec({std::abs(x[0] - 0.5)}); },
       [](const VectorXd& x) {
         MatrixXd d(1, 1);
         d(0, 0) = x[0] >= 0.5 ? 1.0 : -1.0;
         return d;
       },
       1.0},
      {"diffeo", 2,
       [](const VectorXd& x) { return exp::vec({x[0] + 0.2 * x[1] * x[1], x[1] + 0.1 * std::pow(x[0], 3)}); },
       [](const VectorXd& x) {
         MatrixXd d(2, 2);
         d << 1, 0.4 * x[1], 0.3 * x[0] * x[0], 1;
         return d;
       },
       // int_0^1 int_0^1 (1 - 0.12 x^2 y) = 1 - 0.12 / 6
       0.98},
  };
}

}  // namespace

void run_e8_area_formula(const ExperimentConfig& config, ExperimentReport& report) {
  const std::vector<double> spacings = config.list("spacings");
  const double max_gap = config.num("max_gap");
  Table table{{"map", "h", "lhs", "rhs", "gap"}, {}};
  const auto maps = built_in_maps();
  for (std::size_t mi = 0; mi < maps.size(); ++mi) {
    const AreaMap& map = maps[mi];
    for (double h : spacings) {
      const int nodes = static_cast<int>(std::lround(1.0 / h)) + 1;
      const SampledMap g = SampledMap::sample(map.k, h, exp::cube_nodes(map.k, nodes), map.g, euclidean_metric());
      AreaOptions options;
      options.jacobian = map.jacobian;
      const AreaCheck check = area_formula_check(g, options);
      const std::string tag = map.name + "_h" + std::to_string(nodes - 1);
      report.metric("lhs_" + tag, check.lhs);
      report.metric("rhs_" + tag, check.rhs);
      report.metric("gap_" + tag, check.gap);
      report.metric("lhs_error_" + tag, std::abs(check.lhs - map.exact_lhs));
      report.check("gap_" + tag, check.gap, "<", {max_gap});
      table.rows.push_back({static_cast<double>(mi), h, check.lhs, check.rhs, check.gap});
    }
  }
  report.tables["area"] = table;
  report.notes.push_back("area table: map 0 double, 1 fold, 2 diffeo");
  report.figures.push_back({"histogram", "area", "gap", "", "", "area formula gaps"});
}

}  // namespace gmt
