#include "common.hpp"

#include <cmath>

namespace gmt {

void run_e9_straightening(const ExperimentConfig& config, ExperimentReport& report) {
  StraighteningOptions options;
  options.tolerance = config.num("tolerance");
  options.test_points = static_cast<int>(config.integer("test_points"));
  options.seed = config.seed;
  const double max_residual = config.num("max_residual");

  struct Case {
    std::string name;
    int k;
    int j;
    VectorMap g;
    JacobianMap jacobian;
  };
  const std::vector<Case> cases = {
      {"cubic", 2, 1,
       [](const VectorXd& x) { return exp::vec({std::pow(x[0], 3) + x[0], x[1] * x[1]}); },
       [](const VectorXd& x) {
         MatrixXd d(2, 2);
         d << 3 * x[0] * x[0] + 1, 0, 0, 2 * x[1];
         return d;
       }},
      {"coupled", 3, 2,
       [](const VectorXd& x) {
         return exp::vec({x[0] + x[1] * x[1] + 0.3 * std::sin(x[2]), x[1] + x[0] * x[2] + 0.1 * x[0] * x[0],
                          x[2] * x[2] + x[0] * x[1]});
       },
       [](const VectorXd& x) {
         MatrixXd d(3, 3);
         d << 1, 2 * x[1], 0.3 * std::cos(x[2]),  //
             x[2] + 0.2 * x[0], 1, x[0],            //
             x[1], x[0], 2 * x[2];
         return d;
       }},
  };

  Table table{{"case", "point", "residual"}, {}};
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const Case& c = cases[ci];
    const Straightening s =
        straightening_map(c.g, VectorXd::Zero(c.k), c.j, {}, {}, options, c.jacobian);
    // Recompute the residual from the public maps rather than trusting max_residual().
    double worst = 0;
    for (std::size_t p = 0; p < s.test_points().size(); ++p) {
      const VectorXd& w = s.test_points()[p];
      const VectorXd y = s.straightened(w);
      const double r = (y.head(c.j) - w.head(c.j)).cwiseAbs().maxCoeff();
      worst = std::max(worst, r);
      table.rows.push_back({static_cast<double>(ci), static_cast<double>(p), r});
    }
    report.metric("radius_" + c.name, s.radius());
    report.metric("test_points_" + c.name, static_cast<double>(s.test_points().size()));
    report.metric("residual_" + c.name, worst);
    report.check("test_point_count_" + c.name, static_cast<double>(s.test_points().size()), ">=",
                 {static_cast<double>(options.test_points)});
    report.check("residual_" + c.name, worst, "<", {max_residual});
  }
  report.tables["residuals"] = table;
  report.notes.push_back("residuals table: case 0 cubic, 1 coupled");
  report.figures.push_back({"histogram", "residuals", "residual", "", "", "straightening residuals"});
}

}  // namespace gmt
