#include "common.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

namespace gmt {

namespace {

struct CellKey {
  bool operator()(const GridIndex& a, const GridIndex& b) const {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  }
};

// Union of random axis rectangles with at most `budget` cells.
std::vector<GridIndex> random_rectangles(int cells, std::size_t budget, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> corner(0, cells - 1);
  std::uniform_int_distribution<int> side(1, cells / 4);
  std::uniform_int_distribution<int> count(1, 6);
  std::set<GridIndex, CellKey> chosen;
  const int rectangles = count(rng);
  for (int r = 0; r < rectangles; ++r) {
    const int x0 = corner(rng), y0 = corner(rng), wx = side(rng), wy = side(rng);
    for (int x = x0; x < std::min(cells, x0 + wx); ++x) {
      for (int y = y0; y < std::min(cells, y0 + wy); ++y) {
        if (chosen.size() >= budget) break;
        chosen.insert((GridIndex(2) << x, y).finished());
      }
    }
  }
  return {chosen.begin(), chosen.end()};
}

// Cells of the disk of the given area centered at x: the set that maximizes the potential at x.
std::vector<GridIndex> disk_cells(int cells, const VectorXd& x, double area) {
  const double h = 1.0 / cells;
  const double radius = std::sqrt(area / std::numbers::pi);
  std::vector<GridIndex> out;
  for (const auto& idx : exp::cube_nodes(2, cells)) {
    const VectorXd c = (idx.cast<double>().array() + 0.5) * h;
    if ((c - x).norm() <= radius) out.push_back(idx);
  }
  return out;
}

}  // namespace

void run_e3_si_majority(const ExperimentConfig& config, ExperimentReport& report) {
  const int instances = static_cast<int>(config.integer("instances"));
  const auto samples = static_cast<std::size_t>(config.integer("samples"));
  const int cells = static_cast<int>(config.integer("cells"));
  const double max_measure = config.num("max_measure");
  const int disk_every = static_cast<int>(config.integer("disk_every"));
  const double h = 1.0 / cells;
  const auto budget = static_cast<std::size_t>(std::floor(max_measure * cells * cells + 1e-9));
  const Cube q{VectorXd::Constant(2, 0.5), 1.0};

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double min_fraction = std::numeric_limits<double>::infinity();
  double worst_riesz = 0;
  double max_measure_seen = 0;
  double needed_c = 0;  // smallest C that would still put the median at the threshold
  Table table{{"instance", "measure", "fraction", "median", "threshold", "riesz_ratio"}, {}};
  for (int i = 0; i < instances; ++i) {
    const VectorXd x = exp::vec({unit(rng), unit(rng)});
    std::vector<GridIndex> e = (disk_every > 0 && i % disk_every == 0)
                                   ? disk_cells(cells, x, max_measure * 0.95)
                                   : random_rectangles(cells, budget, rng);
    const GridSet set(2, h, VectorXd::Constant(2, 0.5 * h), std::move(e));
    const SegmentStat stat = segment_intersection_stat(set, q, x, samples, derive_seed(config.seed, i));
    const double riesz = riesz_potential(set, x).value;
    const double bound = riesz_ball_constant(2) * std::sqrt(set.measure());
    const double riesz_ratio = bound > 0 ? riesz / bound : 0.0;
    min_fraction = std::min(min_fraction, stat.fraction);
    worst_riesz = std::max(worst_riesz, riesz_ratio);
    max_measure_seen = std::max(max_measure_seen, set.measure());
    if (set.measure() > 0) needed_c = std::max(needed_c, stat.median / std::sqrt(set.measure()));
    table.rows.push_back({static_cast<double>(i), set.measure(), stat.fraction, stat.median, stat.threshold,
                          riesz_ratio});
  }
  report.tables["instances"] = table;
  report.figures.push_back({"histogram", "instances", "fraction", "", "", "fraction of short intersections"});
  report.metric("min_fraction", min_fraction);
  report.metric("max_measure", max_measure_seen);
  report.metric("max_riesz_ratio", worst_riesz);
  report.metric("constant_C", 2 * riesz_ball_constant(2));
  report.metric("median_constant_needed", needed_c);
  report.check("min_fraction", min_fraction, ">", {config.num("min_fraction")});
  report.check("measure_budget", max_measure_seen, "<=", {max_measure});
  report.check("riesz_ball_bound", worst_riesz, "<=", {1 + config.num("riesz_slack")});
}

}  // namespace gmt
