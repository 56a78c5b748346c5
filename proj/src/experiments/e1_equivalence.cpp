#include "common.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace gmt {

namespace {

using exp::vec;

struct Chart {
  std::string name;
  MetricOracle metric;
  VectorMap curve;
  VectorXd lo, hi;  // landmark sampling box
};

// k random target points, each at least `gap` from the image sample and from each other.
LandmarkSet random_landmarks(const Chart& chart, const std::vector<VectorXd>& image, int k,
                             std::mt19937_64& rng, double gap) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LandmarkSet set;
  while (static_cast<int>(set.points.size()) < k) {
    VectorXd y(chart.lo.size());
    for (Index i = 0; i < y.size(); ++i) y[i] = chart.lo[i] + (chart.hi[i] - chart.lo[i]) * u(rng);
    bool ok = true;
    for (const auto& p : image) ok = ok && chart.metric(p, y) > gap;
    for (const auto& p : set.points) ok = ok && chart.metric(p, y) > gap;
    if (ok) set.points.push_back(y);
  }
  set.base = set.points.front();
  return set;
}

}  // namespace

void run_e1_equivalence(const ExperimentConfig& config, ExperimentReport& report) {
  const int n1 = static_cast<int>(config.integer("n1"));
  const int n2 = static_cast<int>(config.integer("n2"));
  const double h = config.num("h");
  const std::vector<double> radii = config.list("radii");
  const double s = config.num("s");
  const double slope_target = config.num("slope_target");
  const double slope_tol = config.num("slope_tol");
  const double min_fraction = config.num("rank_fraction_min");
  JetOptions jets;
  jets.rank_tol = config.num("rank_tol");

  const std::vector<GridIndex> strip = grid_box(GridIndex::Zero(2), (GridIndex(2) << n1 - 1, n2 - 1).finished());

  const double pi = std::numbers::pi;
  const std::vector<Chart> charts = {
      {"R3", euclidean_metric(),
       [pi](const VectorXd& x) { return vec({std::cos(pi * x[0]), std::sin(pi * x[0]), x[0]}); },
       vec({-1.5, -1.5, -0.5}), vec({1.5, 1.5, 1.5})},
      {"H1", koranyi_metric(),
       [pi](const VectorXd& x) { return vec({std::cos(pi * x[0]), std::sin(pi * x[0]), -2 * pi * x[0]}); },
       vec({-1.5, -1.5, -8.0}), vec({1.5, 1.5, 2.0})},
  };

  std::mt19937_64 rng(config.seed);
  const int sets = static_cast<int>(config.integer("landmark_sets"));
  const int kuratowski_n = static_cast<int>(config.integer("kuratowski_landmarks"));
  Table rank_table{{"tol", "R3_landmark_low_rank", "H1_landmark_low_rank"}, {}};
  const std::vector<double> tols = config.list("rank_tols");
  rank_table.rows.assign(tols.size(), std::vector<double>(3, 0.0));
  for (std::size_t t = 0; t < tols.size(); ++t) rank_table.rows[t][0] = tols[t];

  for (std::size_t c = 0; c < charts.size(); ++c) {
    const Chart& chart = charts[c];
    const SampledMap f = SampledMap::sample(2, h, strip, chart.curve, chart.metric);

    // Condition (1): content of f(E) decays.
    const auto series_f = content_series(f.values(), chart.metric, s, radii);
    const double slope_f = content_slope(series_f);
    report.tables["content_f_" + chart.name] = exp::series_table(series_f);
    report.figures.push_back({"decay", "content_f_" + chart.name, "r", "value", "slope_f_" + chart.name,
                              "content of f(E), " + chart.name});
    report.metric("slope_f_" + chart.name, slope_f);
    report.check("slope_f_" + chart.name, slope_f, "in", {slope_target - slope_tol, slope_target + slope_tol});

    // One row of images per x1 column.
    std::vector<VectorXd> image;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.index(i)[1] == 0) image.push_back(f.value(i));
    }

    // Conditions (3) and (4): landmark projections.
    for (int set = 0; set < sets; ++set) {
      const LandmarkSet landmarks = random_landmarks(chart, image, 2, rng, 0.2);
      const SampledMap g = landmark_projection(f, landmarks);
      const std::string tag = chart.name + "_set" + std::to_string(set);
      const Stratification strata = stratify_critical(g, jets);
      const double fraction = exp::low_rank_fraction(strata);
      report.metric("low_rank_fraction_g_" + tag, fraction);
      report.check("low_rank_fraction_g_" + tag, fraction, ">=", {min_fraction});
      const auto series_g = content_series(g.values(), g.target(), s, radii);
      const double slope_g = content_slope(series_g);
      report.metric("slope_g_" + tag, slope_g);
      report.check("slope_g_" + tag, slope_g, "in", {slope_target - slope_tol, slope_target + slope_tol});
      if (set == 0) {
        report.tables["content_g_" + chart.name] = exp::series_table(series_g);
        for (std::size_t t = 0; t < tols.size(); ++t) {
          JetOptions at = jets;
          at.rank_tol = tols[t];
          rank_table.rows[t][c + 1] = exp::low_rank_fraction(stratify_critical(g, at));
        }
      }
    }

    // Condition (2): the Kuratowski image. Landmarks are image points, so every coordinate has a
    // kink along the landmark's preimage column. The residual filter is off, and points whose
    // fit stencil reaches a kink column are left out of the verdict.
    std::vector<VectorXd> landmarks;
    std::vector<int> kink_columns;
    for (int i = 0; i < kuratowski_n; ++i) {
      const std::size_t a = static_cast<std::size_t>(i) * (image.size() - 1) /
                            static_cast<std::size_t>(std::max(kuratowski_n - 1, 1));
      landmarks.push_back(image[a]);
      kink_columns.push_back(static_cast<int>(a));
    }
    const SampledMap kappa = kuratowski_embed(f, landmarks, image.front());
    JetOptions loose = jets;
    loose.residual_threshold = std::numeric_limits<double>::infinity();
    const Stratification kappa_strata = stratify_critical(kappa, loose);
    const int halo = 3;  // default fit radius 3h
    std::size_t away = 0, away_low = 0;
    for (std::size_t i = 0; i < kappa.size(); ++i) {
      bool near_kink = false;
      for (int a : kink_columns) near_kink = near_kink || std::abs(kappa.index(i)[0] - a) <= halo;
      if (near_kink) continue;
      ++away;
      const int label = kappa_strata.labels[i];
      if (label >= 0 && label < 2) ++away_low;
    }
    const double kappa_fraction = static_cast<double>(away_low) / static_cast<double>(std::max<std::size_t>(away, 1));
    report.metric("low_rank_fraction_kuratowski_all_" + chart.name, exp::low_rank_fraction(kappa_strata));
    report.metric("low_rank_fraction_kuratowski_" + chart.name, kappa_fraction);
    report.check("low_rank_fraction_kuratowski_" + chart.name, kappa_fraction, ">=", {min_fraction});

    double expansion = 0, defect = 0;
    for (std::size_t a = 0; a < image.size(); ++a) {
      for (std::size_t b = a + 1; b < image.size(); ++b) {
        const double d = chart.metric(image[a], image[b]);
        // grid_box runs x1 fastest, so point a of the first row is grid point a.
        const double e = linf_distance(kappa.value(a), kappa.value(b));
        expansion = std::max(expansion, e / d);
        defect = std::max(defect, d - e);
      }
    }
    report.metric("kuratowski_max_expansion_" + chart.name, expansion);
    report.metric("kuratowski_isometry_defect_" + chart.name, defect);
    report.check("kuratowski_nonexpansive_" + chart.name, expansion, "<=", {1 + 1e-12});
  }
  report.tables["rank_vs_tol"] = rank_table;

  // Control: a rank-2 surface must not look null.
  const int nc = static_cast<int>(config.integer("control_nodes"));
  const SampledMap surface = SampledMap::sample(
      2, 1.0 / (nc - 1), exp::cube_nodes(2, nc),
      [](const VectorXd& x) { return vec({x[0], x[1], x[0] * x[1]}); }, euclidean_metric());
  const double slope_control = content_slope(content_series(surface.values(), euclidean_metric(), s, radii));
  const double rank2_control = exp::rank_fraction(stratify_critical(surface, jets), 2);
  report.metric("slope_f_control", slope_control);
  report.metric("rank2_fraction_control", rank2_control);
  report.check("slope_f_control", slope_control, "<", {config.num("control_slope_max")});
  report.check("rank2_fraction_control", rank2_control, ">=", {config.num("control_rank2_min")});
}

}  // namespace gmt
