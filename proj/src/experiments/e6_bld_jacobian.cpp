#include "gmt/cc_spaces.hpp"

#include "common.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace gmt {

namespace {

// Straight segments inside the unit square, as constant-control paths of the Euclidean system.
std::vector<HorizontalPathG> random_segments(const VectorFieldSystem& plane, int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<HorizontalPathG> out;
  while (static_cast<int>(out.size()) < count) {
    const VectorXd a = exp::vec({u(rng), u(rng)});
    const VectorXd b = exp::vec({u(rng), u(rng)});
    if ((b - a).norm() < 1e-3) continue;
    out.push_back(integrate_path(plane, a, MatrixXd(b - a), 2));
  }
  return out;
}

std::vector<HorizontalPathG> vertical_segments(const VectorFieldSystem& plane, int count) {
  std::vector<HorizontalPathG> out;
  for (int i = 0; i < count; ++i) {
    const double x = (i + 0.5) / count;
    out.push_back(integrate_path(plane, exp::vec({x, 0.1}), MatrixXd(exp::vec({0.0, 0.8})), 2));
  }
  return out;
}

}  // namespace

void run_e6_bld_jacobian(const ExperimentConfig& config, ExperimentReport& report) {
  const int curves = static_cast<int>(config.integer("curves"));
  const int nodes = static_cast<int>(config.integer("nodes"));
  const double bound = config.num("bld_bound");
  const double slack = config.num("jacobian_slack");
  const double min_fraction = config.num("jacobian_fraction_min");
  constexpr int n = 2;

  const VectorFieldSystem plane = VectorFieldSystem::euclidean(n, Box{VectorXd::Zero(n), VectorXd::Ones(n)});
  std::mt19937_64 rng(config.seed);
  const std::vector<HorizontalPathG> segments = random_segments(plane, curves, rng);

  const double angle = std::numbers::pi / 6;
  Eigen::Matrix2d rotation;
  rotation << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  struct TestMap {
    std::string name;
    MatrixXd a;
  };
  const std::vector<TestMap> maps = {
      {"identity", MatrixXd::Identity(n, n)},
      {"rotation", rotation},
      {"scaling", 2 * MatrixXd::Identity(n, n)},
  };

  Table table{{"map", "ratio_min", "ratio_max", "C", "c", "min_jacobian", "fraction"}, {}};
  for (std::size_t mi = 0; mi < maps.size(); ++mi) {
    const auto& map = maps[mi];
    const VectorMap phi = [a = map.a](const VectorXd& x) { return VectorXd(a * x); };
    const BldReport bld = weak_bld_estimate(phi, segments, bound);
    // Length distortion at most C gives |J| >= C^-n.
    const double c = std::pow(bld.implied_constant, -n);

    const SampledMap f =
        SampledMap::sample(n, 1.0 / (nodes - 1), exp::cube_nodes(n, nodes), phi, euclidean_metric());
    const Stratification strata = stratify_critical(f);
    std::size_t resolved = 0, above = 0;
    double min_jacobian = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (strata.labels[i] < 0) continue;
      ++resolved;
      const double jac = std::abs(approx_jet(f, i).derivative.determinant());
      min_jacobian = std::min(min_jacobian, jac);
      if (jac >= c * (1 - slack)) ++above;
    }
    const double fraction = resolved == 0 ? 0.0 : static_cast<double>(above) / static_cast<double>(resolved);
    report.metric("bld_constant_" + map.name, bld.implied_constant);
    report.metric("jacobian_lower_c_" + map.name, c);
    report.metric("min_jacobian_" + map.name, min_jacobian);
    report.metric("jacobian_fraction_" + map.name, fraction);
    report.check("weak_bld_" + map.name, bld.passed ? 1.0 : 0.0, "==", {1.0});
    report.check("c_positive_" + map.name, c, ">", {0.0});
    report.check("jacobian_above_c_" + map.name, fraction, ">=", {min_fraction});
    table.rows.push_back({static_cast<double>(mi), bld.ratio_min, bld.ratio_max, bld.implied_constant, c,
                          min_jacobian, fraction});
  }
  report.tables["maps"] = table;
  report.notes.push_back("maps table: map 0 identity, 1 rotation, 2 scaling");

  // (x1, x2) -> (x1, 0) collapses vertical segments.
  const VectorMap collapse = [](const VectorXd& x) { return exp::vec({x[0], 0.0}); };
  const BldReport degenerate = weak_bld_estimate(collapse, vertical_segments(plane, curves), bound);
  report.metric("collapse_ratio_min", degenerate.ratio_min);
  report.check("collapse_ratio_vanishes", degenerate.ratio_min, "<", {config.num("collapse_ratio_max")});
  report.check("collapse_fails_weak_bld", degenerate.passed ? 1.0 : 0.0, "==", {0.0});
}

}  // namespace gmt
