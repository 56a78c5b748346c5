#include "gmt/metric.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gmt {

const char* to_string(PointKind kind) {
  switch (kind) {
    case PointKind::euclidean: return "euclidean";
    case PointKind::linf: return "linf";
    case PointKind::heisenberg: return "heisenberg";
    case PointKind::cc: return "cc";
  }
  return "euclidean";
}

PointKind point_kind_from_string(const std::string& tag) {
  if (tag == "euclidean") return PointKind::euclidean;
  if (tag == "linf") return PointKind::linf;
  if (tag == "heisenberg") return PointKind::heisenberg;
  if (tag == "cc") return PointKind::cc;
  throw Error(ErrorKind::contract_violation, "unknown point kind '" + tag + "'");
}

MetricOracle euclidean_metric() {
  return {PointKind::euclidean, [](const VectorXd& p, const VectorXd& q) {
            require(p.size() == q.size(), "euclidean distance: dimension mismatch");
            return (p - q).norm();
          }};
}

MetricOracle linf_metric() {
  return {PointKind::linf,
          [](const VectorXd& p, const VectorXd& q) { return linf_distance(p, q); }};
}

TriangleCheck check_metric_axioms(const MetricOracle& metric,
                                  const std::function<VectorXd(std::uint64_t)>& sampler,
                                  std::size_t triples, double tolerance) {
  TriangleCheck out;
  out.triples = triples;
  for (std::size_t i = 0; i < triples; ++i) {
    const VectorXd p = sampler(3 * i);
    const VectorXd q = sampler(3 * i + 1);
    const VectorXd r = sampler(3 * i + 2);
    const double pq = metric(p, q);
    const double excess = pq - metric(p, r) - metric(r, q);
    out.worst_excess = std::max(out.worst_excess, excess);
    if (excess > tolerance) ++out.violations;
    out.max_asymmetry = std::max(out.max_asymmetry, std::abs(pq - metric(q, p)));
    out.max_self_distance = std::max(out.max_self_distance, metric(p, p));
  }
  return out;
}

SampledMap::SampledMap(int k, double h, std::vector<GridIndex> indices,
                       std::vector<VectorXd> values, MetricOracle target)
    : k_(k), h_(h), indices_(std::move(indices)), values_(std::move(values)),
      target_(std::move(target)) {
  require(k >= 1, "SampledMap: domain dimension must be >= 1");
  require(h > 0, "SampledMap: grid spacing must be positive");
  require(indices_.size() == values_.size(), "SampledMap: |values| != |domain_points|");
  lookup_.reserve(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    require(indices_[i].size() == k, "SampledMap: index dimension != k");
    require(values_[i].size() == values_.front().size(), "SampledMap: ragged values");
    const bool inserted = lookup_.emplace(indices_[i], i).second;
    require(inserted, "SampledMap: duplicate domain point");
  }
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    GridIndex neighbor = indices_[i];
    for (int axis = 0; axis < k_; ++axis) {
      neighbor[axis] += 1;
      if (auto j = find(neighbor)) {
        lipschitz_ = std::max(lipschitz_, target_(values_[i], values_[*j]) / h_);
      }
      neighbor[axis] -= 1;
    }
  }
}

SampledMap SampledMap::sample(int k, double h, std::vector<GridIndex> indices, const VectorMap& f,
                              MetricOracle target) {
  std::vector<VectorXd> values;
  values.reserve(indices.size());
  for (const auto& index : indices) values.push_back(f(h * index.cast<double>()));
  return SampledMap(k, h, std::move(indices), std::move(values), std::move(target));
}

std::optional<std::size_t> SampledMap::find(const GridIndex& index) const {
  auto it = lookup_.find(index);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

SampledMap SampledMap::with_values(std::vector<VectorXd> values, MetricOracle target) const {
  return SampledMap(k_, h_, indices_, std::move(values), std::move(target));
}

SampledMap landmark_projection(const SampledMap& f, const LandmarkSet& landmarks) {
  const auto& ys = landmarks.points;
  require(static_cast<int>(ys.size()) == f.k(), "landmark_projection: need exactly k landmarks");
  const auto& d = f.target();
  for (std::size_t a = 0; a < ys.size(); ++a) {
    for (std::size_t b = a + 1; b < ys.size(); ++b) {
      if (!(d(ys[a], ys[b]) > 0)) {
        throw Error(ErrorKind::invalid_landmark,
                    "landmarks " + std::to_string(a) + " and " + std::to_string(b) + " coincide");
      }
    }
  }
  std::vector<VectorXd> values;
  values.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    VectorXd g(f.k());
    for (int c = 0; c < f.k(); ++c) g[c] = d(f.value(i), ys[c]);
    values.push_back(std::move(g));
  }
  return f.with_values(std::move(values), linf_metric());
}

SampledMap kuratowski_embed(const SampledMap& f, const std::vector<VectorXd>& landmarks,
                            const VectorXd& base) {
  require(!landmarks.empty(), "kuratowski_embed: empty landmark list");
  const auto& d = f.target();
  const auto n = static_cast<Index>(landmarks.size());
  VectorXd offset(n);
  for (Index i = 0; i < n; ++i) offset[i] = d(landmarks[i], base);
  std::vector<VectorXd> values;
  values.reserve(f.size());
  for (std::size_t p = 0; p < f.size(); ++p) {
    VectorXd kappa(n);
    for (Index i = 0; i < n; ++i) kappa[i] = d(f.value(p), landmarks[i]) - offset[i];
    values.push_back(std::move(kappa));
  }
  return f.with_values(std::move(values), linf_metric());
}

McShaneExtension::McShaneExtension(MatrixXd points, VectorXd values, double lipschitz,
                                   double tolerance)
    : points_(std::move(points)), values_(std::move(values)), lipschitz_(lipschitz) {
  require(points_.cols() == values_.size(), "McShaneExtension: point/value count mismatch");
  require(points_.cols() >= 1, "McShaneExtension: empty data");
  require(lipschitz_ >= 0, "McShaneExtension: negative Lipschitz constant");
  for (Index a = 0; a < points_.cols(); ++a) {
    for (Index b = a + 1; b < points_.cols(); ++b) {
      const double bound = lipschitz_ * (points_.col(a) - points_.col(b)).norm();
      if (std::abs(values_[a] - values_[b]) > bound + tolerance) {
        throw Error(ErrorKind::inconsistent_data,
                    "values at points " + std::to_string(a) + " and " + std::to_string(b) +
                        " violate the Lipschitz bound");
      }
    }
  }
}

double McShaneExtension::operator()(const VectorXd& x) const {
  require(x.size() == points_.rows(), "McShaneExtension: query dimension mismatch");
  return (values_.array() + lipschitz_ * (points_.colwise() - x).colwise().norm().transpose().array())
      .minCoeff();
}

double mcshane_extend(const MatrixXd& points, const VectorXd& values, double lipschitz,
                      const VectorXd& x) {
  return McShaneExtension(points, values, lipschitz)(x);
}

}  // namespace gmt
