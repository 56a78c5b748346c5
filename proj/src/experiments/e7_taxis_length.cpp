#include "gmt/cc_spaces.hpp"
#include "gmt/heisenberg.hpp"

#include "common.hpp"

#include <cmath>
#include <numbers>

namespace gmt {

void run_e7_taxis_length(const ExperimentConfig& config, ExperimentReport& report) {
  const double tau = config.num("tau");
  const std::vector<double> refinements = config.list("refinements");
  CcOptions cc;
  cc.segments = static_cast<int>(config.integer("segments"));
  cc.restarts = static_cast<int>(config.integer("restarts"));
  cc.seed = config.seed;

  auto vertical = [](double t) {
    HPoint p = HPoint::identity(1);
    p.t = t;
    return p;
  };

  // Left translation is an isometry, so every piece of the N-fold subdivision has the length of
  // the piece starting at the origin.
  Table table{{"N", "chord_sum", "closed_form"}, {}};
  std::vector<double> sums;
  double worst_rel = 0;
  for (double nv : refinements) {
    const double piece = cc_distance_h(HPoint::identity(1), vertical(tau / nv), cc).upper;
    const double sum = nv * piece;
    const double exact = std::sqrt(std::numbers::pi * tau * nv);
    worst_rel = std::max(worst_rel, std::abs(sum - exact) / exact);
    sums.push_back(sum);
    table.rows.push_back({nv, sum, exact});
  }
  const double slope = loglog_fit(refinements, sums).slope;
  report.tables["chord_sums"] = table;
  report.figures.push_back({"decay", "chord_sums", "N", "chord_sum", "refinement_slope",
                            "chord-sum length of the t-segment"});
  report.metric("refinement_slope", slope);
  report.metric("chord_sum_finest", sums.back());
  report.metric("euclidean_length", tau);
  report.metric("max_rel_error_closed_form", worst_rel);
  const double target = config.num("slope_target");
  const double tol = config.num("slope_tol");
  report.check("refinement_slope", slope, "in", {target - tol, target + tol});
  report.check("exceeds_euclidean", sums.back() / tau, ">", {config.num("excess_factor")});

  // Dilation: d_cc(0, (0, t)) scales like t^(1/2).
  const std::vector<double> taus = config.list("tau_scan");
  std::vector<double> lengths;
  for (double t : taus) lengths.push_back(cc_distance_h(HPoint::identity(1), vertical(t), cc).upper);
  const double tau_exponent = loglog_fit(taus, lengths).slope;
  report.metric("tau_exponent", tau_exponent);
  report.check("tau_exponent", tau_exponent, "in", {0.5 - config.num("tau_exponent_tol"),
                                                     0.5 + config.num("tau_exponent_tol")});

  // Same piece through the general vector-field solver.
  const double n0 = refinements.front();
  const double r = 1.0;
  const VectorFieldSystem heis =
      VectorFieldSystem::heisenberg(1, Box{VectorXd::Constant(3, -r), VectorXd::Constant(3, r)});
  CcGeneralOptions general;
  general.seed = config.seed;
  general.segments = static_cast<int>(config.integer("general_segments"));
  const double via_general =
      cc_distance_general(heis, VectorXd::Zero(3), exp::vec({0.0, 0.0, tau / n0}), general).upper;
  const double via_group = table.rows.front()[1] / n0;
  const double disagreement = std::abs(via_general - via_group) / via_group;
  report.metric("general_solver_piece", via_general);
  report.metric("general_solver_disagreement", disagreement);
  report.check("general_solver_agrees", disagreement, "<", {config.num("general_tol")});

  const CcBounds loop = cc_distance_h(HPoint::identity(1), vertical(tau), cc);
  Table path{{"x", "y", "t"}, {}};
  for (const auto& p : loop.path.positions) path.rows.push_back({p.z[0], p.z[1], p.t});
  report.tables["geodesic"] = path;
  report.figures.push_back({"path3d", "geodesic", "x", "y", "", "shortest loop found to (0, 0, tau)"});
  report.metric("loop_length", loop.upper);
  report.metric("loop_lower_bound", loop.lower);
}

}  // namespace gmt
