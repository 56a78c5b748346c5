#pragma once

#include "gmt/metric.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace gmt {

struct Ball {
  VectorXd center;
  double radius = 0;
};

/// Finite ball cover; content(s) = sum of r_i^s.
struct Cover {
  std::vector<Ball> balls;
  double s = 0;

  double content() const;
  double content(double dimension) const;
};

struct ContentEstimate {
  double resolution = 0;
  double value = 0;
  std::size_t ball_count = 0;
};

/// Farthest-point ordering of a point cloud. The first `count_for(r)` centers cover every
/// point within r, so one ordering serves every resolution.
class FarthestPointCover {
 public:
  /// Stops once the covering radius drops to `stop_radius`; count_for(r) needs r >= stop_radius.
  FarthestPointCover(std::vector<VectorXd> points, MetricOracle metric, double stop_radius = 0);

  /// Number of greedy centers needed for covering radius <= r.
  std::size_t count_for(double r) const;
  Cover cover(double r, double s) const;

  const std::vector<std::size_t>& order() const { return order_; }
  /// radii_[i]: covering radius achieved by the first i+1 centers.
  const std::vector<double>& radii() const { return radii_; }

 private:
  std::vector<VectorXd> points_;
  MetricOracle metric_;
  std::vector<std::size_t> order_;
  std::vector<double> radii_;
  double stop_radius_;
};

ContentEstimate hausdorff_content(const std::vector<VectorXd>& points, const MetricOracle& metric,
                                  double s, double r);

std::vector<ContentEstimate> content_series(const std::vector<VectorXd>& points,
                                            const MetricOracle& metric, double s,
                                            const std::vector<double>& radii);

/// Slope of log(value) against log(r) over a series.
double content_slope(const std::vector<ContentEstimate>& series);

/// Axis-parallel cube, i.e. a closed ball of the sup metric.
struct Cube {
  VectorXd center;
  double edge = 0;

  bool intersects(const Cube& other) const;
  bool contains(const Cube& other) const;
  Cube dilated(double factor) const { return {center, edge * factor}; }
};

/// Greedy 5r-covering selection: largest cubes first, keep those disjoint from the kept ones.
/// Returns indices into `cubes`.
std::vector<std::size_t> vitali_select(const std::vector<Cube>& cubes);

/// Finite union of grid cells of edge h centered at origin + h * index.
class GridSet {
 public:
  GridSet(int k, double h, VectorXd origin, std::vector<GridIndex> indices);

  /// Cells of the box [lo, hi] (in physical units) at spacing h; lo-hi must be a multiple of h.
  static GridSet box(const VectorXd& lo, const VectorXd& hi, double h);

  int k() const { return k_; }
  double h() const { return h_; }
  const VectorXd& origin() const { return origin_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  const std::vector<GridIndex>& indices() const { return indices_; }
  VectorXd center(std::size_t i) const { return origin_ + h_ * indices_[i].cast<double>(); }
  double cell_volume() const;
  double measure() const { return cell_volume() * static_cast<double>(size()); }
  bool contains(const GridIndex& index) const { return lookup_.count(index) != 0; }
  /// Cell containing the physical point x (half-open cells), if it belongs to the set.
  bool contains_point(const VectorXd& x) const;
  GridIndex cell_of(const VectorXd& x) const;

  /// True when the cells form a full rectangular block.
  bool is_box() const;

 private:
  int k_;
  double h_;
  VectorXd origin_;
  std::vector<GridIndex> indices_;
  std::unordered_set<GridIndex, GridIndexHash, GridIndexEqual> lookup_;
};

/// Value of the potential of the equal-measure ball: int_B |y|^{1-k} dy = C(k) |B|^{1/k}.
double riesz_ball_constant(int k);

struct RieszResult {
  double value = 0;
  bool regularized = false;  // some cell touching x used its exact cell average
};

/// Midpoint quadrature of int_E |x - y|^{1-k} dy.
RieszResult riesz_potential(const GridSet& set, const VectorXd& x);

/// Exact integral of |y - x|^{1-k} over the axis box [lo, hi] for k <= 2.
double cell_kernel_integral(const VectorXd& lo, const VectorXd& hi, const VectorXd& x);

struct PoincareResult {
  double lhs = 0;  // |u(x) - u_D|
  double rhs = 0;  // (diam D)^k / (k |D|) * int_D |grad u| |x - y|^{1-k} dy
  double average = 0;
  double diameter = 0;
};

/// Deviation-from-average bound for a Lipschitz u on a box-shaped grid set D.
PoincareResult poincare_deviation(const GridSet& domain, const ScalarField& u, const VectorXd& x);

struct SegmentStat {
  double median = 0;
  double mean = 0;
  double fraction = 0;   // fraction of samples with I_x(y) <= threshold
  double threshold = 0;  // C * H^n(E)^{1/n}
  double constant = 0;   // C = 2 * riesz_ball_constant(n)
  std::size_t samples = 0;
};

/// Length of the segment [x, y] lying in the cells of `set`, by midpoint quadrature with
/// `steps_per_cell` samples per cell width.
double segment_intersection_length(const GridSet& set, const VectorXd& x, const VectorXd& y,
                                   int steps_per_cell = 8);

/// Monte Carlo statistic of I_x(y) = H^1([x,y] cap E) for y uniform in the cube Q.
SegmentStat segment_intersection_stat(const GridSet& set, const Cube& cube, const VectorXd& x,
                                      std::size_t samples, std::uint64_t seed);

}  // namespace gmt
