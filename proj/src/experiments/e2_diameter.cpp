#include "common.hpp"

#include <cmath>
#include <limits>

namespace gmt {

void run_e2_diameter(const ExperimentConfig& config, ExperimentReport& report) {
  const std::vector<double> widths = config.list("widths");
  const double lip = config.num("lipschitz");
  const double grad_tol = config.num("grad_tol");
  const double exponent_tol = config.num("exponent_tol");

  double fitted_c = 0;
  Table instances{{"k", "width", "measure_noncritical", "diameter", "ratio"}, {}};
  for (int k = 1; k <= 2; ++k) {
    const double h = config.num(k == 1 ? "h1" : "h2");
    const int n = static_cast<int>(std::lround(1.0 / h)) + 1;
    const auto nodes = exp::cube_nodes(k, n);
    std::vector<double> measures, diameters;
    for (double w : widths) {
      const VectorXd c = VectorXd::Constant(k, 0.5);
      const ScalarField cone = [&](const VectorXd& x) { return lip * std::max(0.0, w - (x - c).norm()); };
      const SampledMap f = SampledMap::sample(
          k, h, nodes, [&](const VectorXd& x) { return VectorXd::Constant(1, cone(x)); }, euclidean_metric());

      double lo = f.value(0)[0], hi = lo;
      std::size_t moving = 0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        lo = std::min(lo, f.value(i)[0]);
        hi = std::max(hi, f.value(i)[0]);
        // Central differences, one-sided on the boundary.
        double grad2 = 0;
        for (int a = 0; a < k; ++a) {
          GridIndex up = f.index(i), down = f.index(i);
          ++up[a];
          --down[a];
          const auto iu = f.find(up), id = f.find(down);
          const double fu = iu ? f.value(*iu)[0] : f.value(i)[0];
          const double fd = id ? f.value(*id)[0] : f.value(i)[0];
          const double span = ((iu ? 1 : 0) + (id ? 1 : 0)) * h;
          grad2 += std::pow((fu - fd) / span, 2);
        }
        if (std::sqrt(grad2) > grad_tol * lip) ++moving;
      }
      const double measure = static_cast<double>(moving) * std::pow(h, k);
      const double diameter = hi - lo;
      const double ratio = diameter / (lip * std::pow(measure, 1.0 / k));
      fitted_c = std::max(fitted_c, ratio);
      measures.push_back(measure);
      diameters.push_back(diameter);
      instances.rows.push_back({static_cast<double>(k), w, measure, diameter, ratio});
    }
    const double exponent = loglog_fit(measures, diameters).slope;
    const std::string tag = "k" + std::to_string(k);
    report.metric("exponent_" + tag, exponent);
    report.check("exponent_" + tag, exponent, "in", {1.0 / k - exponent_tol, 1.0 / k + exponent_tol});

    // Constant produced by the proof: twice the deviation bound on the unit cube.
    const double proof_c = 2 * std::pow(std::sqrt(static_cast<double>(k)), k) / k * riesz_ball_constant(k);
    report.metric("proof_constant_" + tag, proof_c);

    // Deviation-from-average inequality on the same cones, coarser cells.
    const double hc = config.num("poincare_h");
    const GridSet domain = GridSet::box(VectorXd::Zero(k), VectorXd::Ones(k), hc);
    const double w = widths[widths.size() / 2];
    const ScalarField cone = [&](const VectorXd& x) {
      return lip * std::max(0.0, w - (x - VectorXd::Constant(k, 0.5)).norm());
    };
    double worst_margin = std::numeric_limits<double>::infinity();
    for (const VectorXd& x : {VectorXd(VectorXd::Constant(k, 0.5)), VectorXd(VectorXd::Constant(k, 0.5 * hc)),
                              VectorXd(VectorXd::Constant(k, 0.5 + 0.3 * w))}) {
      const PoincareResult p = poincare_deviation(domain, cone, x);
      worst_margin = std::min(worst_margin, p.rhs - p.lhs);
    }
    report.metric("poincare_min_margin_" + tag, worst_margin);
    report.check("poincare_holds_" + tag, worst_margin, ">=", {0.0});
  }
  report.tables["instances"] = instances;
  report.figures.push_back({"decay", "instances", "measure_noncritical", "diameter", "",
                            "diameter of f(D) against measure of D minus A"});
  report.metric("fitted_constant", fitted_c);
  for (int k = 1; k <= 2; ++k) {
    const std::string tag = "k" + std::to_string(k);
    report.check("fitted_constant_below_proof_" + tag, fitted_c, "<=",
                 {report.find_metric("proof_constant_" + tag)->value});
  }
}

}  // namespace gmt
