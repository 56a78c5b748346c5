#pragma once

#include "gmt/types.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace gmt {

enum class PointKind { euclidean, linf, heisenberg, cc };

const char* to_string(PointKind kind);
PointKind point_kind_from_string(const std::string& tag);

/// Distance function together with the representation tag of the points it accepts.
struct MetricOracle {
  PointKind kind = PointKind::euclidean;
  std::function<double(const VectorXd&, const VectorXd&)> dist;

  double operator()(const VectorXd& p, const VectorXd& q) const { return dist(p, q); }
};

MetricOracle euclidean_metric();
MetricOracle linf_metric();

struct TriangleCheck {
  std::size_t triples = 0;
  std::size_t violations = 0;
  double worst_excess = 0;  // max of d(p,q) - d(p,r) - d(r,q)
  double max_asymmetry = 0;
  double max_self_distance = 0;
};

/// Spot-checks the metric axioms on random triples drawn by `sampler`.
TriangleCheck check_metric_axioms(const MetricOracle& metric,
                                  const std::function<VectorXd(std::uint64_t)>& sampler,
                                  std::size_t triples, double tolerance);

/// A map f : E -> X known only on a finite h-grid E of R^k.
class SampledMap {
 public:
  SampledMap(int k, double h, std::vector<GridIndex> indices, std::vector<VectorXd> values,
             MetricOracle target);

  /// Samples `f` on the given grid points h * index.
  static SampledMap sample(int k, double h, std::vector<GridIndex> indices, const VectorMap& f,
                           MetricOracle target);

  int k() const { return k_; }
  double h() const { return h_; }
  std::size_t size() const { return indices_.size(); }
  Index value_dim() const { return values_.empty() ? 0 : values_.front().size(); }

  const GridIndex& index(std::size_t i) const { return indices_[i]; }
  const std::vector<GridIndex>& indices() const { return indices_; }
  VectorXd point(std::size_t i) const { return h_ * indices_[i].cast<double>(); }
  const VectorXd& value(std::size_t i) const { return values_[i]; }
  const std::vector<VectorXd>& values() const { return values_; }
  const MetricOracle& target() const { return target_; }

  /// Max of dist(f(x), f(y)) / |x - y| over axis-adjacent grid pairs.
  double lipschitz() const { return lipschitz_; }

  std::optional<std::size_t> find(const GridIndex& index) const;

  /// Same grid, new values in a new target.
  SampledMap with_values(std::vector<VectorXd> values, MetricOracle target) const;

 private:
  int k_;
  double h_;
  std::vector<GridIndex> indices_;
  std::vector<VectorXd> values_;
  MetricOracle target_;
  std::unordered_map<GridIndex, std::size_t, GridIndexHash, GridIndexEqual> lookup_;
  double lipschitz_ = 0;
};

struct LandmarkSet {
  std::vector<VectorXd> points;  // y_1..y_k
  VectorXd base;                 // y_0
};

/// g(x) = (d(f(x), y_1), ..., d(f(x), y_k)), returned with the sup metric on R^k.
SampledMap landmark_projection(const SampledMap& f, const LandmarkSet& landmarks);

/// x -> (d(f(x), y_i) - d(y_i, y_0))_i in the truncated sequence space l^inf_N.
SampledMap kuratowski_embed(const SampledMap& f, const std::vector<VectorXd>& landmarks,
                            const VectorXd& base);

/// Canonical L-Lipschitz extension x -> min_y (f(y) + L |x - y|) of scalar data on a finite set.
class McShaneExtension {
 public:
  /// `points` is k x P; throws inconsistent_data if the data is not L-Lipschitz.
  McShaneExtension(MatrixXd points, VectorXd values, double lipschitz, double tolerance = 1e-9);

  double operator()(const VectorXd& x) const;

  double lipschitz() const { return lipschitz_; }

 private:
  MatrixXd points_;
  VectorXd values_;
  double lipschitz_;
};

double mcshane_extend(const MatrixXd& points, const VectorXd& values, double lipschitz,
                      const VectorXd& x);

}  // namespace gmt
