#pragma once

#include "gmt/control.hpp"
#include "gmt/metric.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gmt {

struct Box {
  VectorXd lo;
  VectorXd hi;

  Index dim() const { return lo.size(); }
  bool contains(const VectorXd& p, double slack = 0) const;
  double diameter() const { return (hi - lo).norm(); }
};

/// Field matrix at p: column i is X_i(p).
using FieldFn = std::function<MatrixXd(const VectorXd&)>;

struct FieldConditioning {
  double min_field_norm = 0;  // inf over samples and i of |X_i(p)|
  double min_singular = 0;
  double max_singular = 0;
  double constant = 0;  // max(sigma_max, 1 / sigma_min): C^-1 l <= l_H <= C l
  std::size_t samples = 0;
};

/// Vector fields X_1..X_m on a box in R^n, checked for nondegeneracy on a dense sample.
class VectorFieldSystem {
 public:
  /// Throws degenerate_fields when some sampled field vanishes or the fields become dependent.
  VectorFieldSystem(std::string name, int n, int m, FieldFn fields, double lipschitz_bound, Box domain,
                    int samples_per_axis = 33);

  static VectorFieldSystem euclidean(int n, const Box& domain);
  /// H^n with the frame X_i = d/dx_i + 2 y_i d/dt, Y_i = d/dy_i - 2 x_i d/dt.
  static VectorFieldSystem heisenberg(int n, const Box& domain);
  /// X_1 = d/dx, X_2 = x d/dy; rejected on boxes that meet x = 0.
  static VectorFieldSystem grushin(const Box& domain);

  const std::string& name() const { return name_; }
  int n() const { return n_; }
  int m() const { return m_; }
  const Box& domain() const { return domain_; }
  double lipschitz_bound() const { return lipschitz_bound_; }
  const FieldConditioning& conditioning() const { return conditioning_; }
  MatrixXd fields(const VectorXd& p) const { return fields_(p); }

 private:
  std::string name_;
  int n_;
  int m_;
  FieldFn fields_;
  double lipschitz_bound_;
  Box domain_;
  FieldConditioning conditioning_;
};

/// Builds a built-in system from TOML keys name = "euclidean"|"heisenberg"|"grushin", n,
/// box_lo, box_hi. `table` selects a [table]; empty means top level.
VectorFieldSystem system_from_toml(const std::string& text, const std::string& table = "");

struct HorizontalPathG {
  std::vector<double> times;      // M + 1 nodes on [0, 1]
  MatrixXd controls;              // m x M
  VectorXd start;
  std::vector<VectorXd> positions;       // at the M + 1 nodes
  std::vector<VectorXd> fine_positions;  // at every midpoint substep
  int substeps = 4;
};

/// Explicit midpoint integration of gamma' = sum a_i X_i(gamma), `substeps` per segment.
HorizontalPathG integrate_path(const VectorFieldSystem& system, const VectorXd& start,
                               const MatrixXd& controls, int substeps = 4);

/// |v|_H at p; throws not_horizontal when v is outside span X_i(p).
double horizontal_norm(const VectorFieldSystem& system, const VectorXd& p, const VectorXd& v);
/// sum_j |a_j| dt
double horizontal_length(const HorizontalPathG& path);
/// Euclidean chord sum over the fine positions.
double euclidean_length(const HorizontalPathG& path);

struct CcGeneralOptions {
  int segments = 16;
  int restarts = 3;
  std::uint64_t seed = 1;
  int substeps = 4;
};

struct CcGeneralResult {
  double upper = 0;
  double residual = 0;
  std::vector<double> restart_lengths;
  std::vector<double> best_so_far;
  std::uint64_t seed = 0;
  HorizontalPathG path;
};

/// Best horizontal length over optimized controls; leaving the domain box is penalized.
CcGeneralResult cc_distance_general(const VectorFieldSystem& system, const VectorXd& p,
                                    const VectorXd& q, const CcGeneralOptions& options = {});

MetricOracle cc_metric(const VectorFieldSystem& system, const CcGeneralOptions& options = {});

struct BldReport {
  std::size_t curves = 0;
  std::size_t skipped = 0;  // zero-length input curves
  double ratio_min = 0;     // min l_Y(Phi o gamma) / l_X(gamma)
  double ratio_max = 0;
  double implied_constant = 0;  // max(ratio_max, 1 / ratio_min)
  double c_phi = 0;             // 1 / ratio_min
  double bound = 0;             // supplied C
  bool passed = false;          // all ratios within [1/C, C]
};

/// l_X is the horizontal length of each curve; l_Y is the chord sum of Phi over fine positions.
BldReport weak_bld_estimate(const VectorMap& phi, const std::vector<HorizontalPathG>& curves, double bound);

struct FoundPath {
  std::vector<VectorXd> points;
  double length = 0;
};

/// Returns a curve from x to y and its length, or nothing when the search failed.
using PathFinder = std::function<std::optional<FoundPath>(const VectorXd&, const VectorXd&)>;

struct QuasiconvexityReport {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> lengths;
  std::vector<double> distances;
  std::vector<bool> failed;
  double m = 0;  // max length / distance over successful pairs
  std::size_t failures = 0;
};

/// All pairs when they fit in `budget`, otherwise `budget` seeded random pairs.
QuasiconvexityReport quasiconvexity_probe(const MetricOracle& metric, const std::vector<VectorXd>& points,
                                          std::size_t budget, const PathFinder& finder,
                                          std::uint64_t seed);

/// Straight segments; fails when a segment leaves the region.
PathFinder straight_path_finder(std::function<bool(const VectorXd&)> inside);

/// Shortest path on a lattice of the region (8-neighbour style, all 3^n - 1 directions) followed
/// by string pulling. Euclidean lengths.
PathFinder grid_path_finder(std::function<bool(const VectorXd&)> inside, Box box, double resolution);

/// Paths from cc_distance_general; length is the horizontal length.
PathFinder cc_path_finder(const VectorFieldSystem& system, const CcGeneralOptions& options = {});

}  // namespace gmt
