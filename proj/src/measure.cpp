#include "gmt/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace gmt {

double Cover::content() const { return content(s); }

double Cover::content(double dimension) const {
  double total = 0;
  for (const auto& ball : balls) total += std::pow(ball.radius, dimension);
  return total;
}

FarthestPointCover::FarthestPointCover(std::vector<VectorXd> points, MetricOracle metric,
                                       double stop_radius)
    : points_(std::move(points)), metric_(std::move(metric)), stop_radius_(stop_radius) {
  require(!points_.empty(), "FarthestPointCover: empty point cloud");
  const std::size_t n = points_.size();
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::size_t next = 0;
  while (true) {
    order_.push_back(next);
    const VectorXd& c = points_[next];
    double farthest = -1;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (nearest[i] > 0) nearest[i] = std::min(nearest[i], metric_(points_[i], c));
      if (nearest[i] > farthest) {
        farthest = nearest[i];
        arg = i;
      }
    }
    radii_.push_back(farthest);
    if (farthest <= stop_radius_ || farthest <= 0) break;
    next = arg;
  }
}

std::size_t FarthestPointCover::count_for(double r) const {
  require(r > 0, "covering resolution must be positive");
  require(r >= stop_radius_, "covering resolution below the precomputed stop radius");
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    if (radii_[i] <= r) return i + 1;
  }
  return radii_.size();
}

Cover FarthestPointCover::cover(double r, double s) const {
  Cover out;
  out.s = s;
  const std::size_t count = count_for(r);
  out.balls.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.balls.push_back({points_[order_[i]], r});
  return out;
}

ContentEstimate hausdorff_content(const std::vector<VectorXd>& points, const MetricOracle& metric,
                                  double s, double r) {
  require(r > 0, "hausdorff_content: resolution must be positive");
  require(s >= 0, "hausdorff_content: dimension must be nonnegative");
  return content_series(points, metric, s, {r}).front();
}

std::vector<ContentEstimate> content_series(const std::vector<VectorXd>& points,
                                            const MetricOracle& metric, double s,
                                            const std::vector<double>& radii) {
  require(!points.empty(), "content_series: empty point cloud");
  require(!radii.empty(), "content_series: no resolutions");
  for (double r : radii) require(r > 0, "content_series: resolution must be positive");
  const FarthestPointCover fps(points, metric, *std::min_element(radii.begin(), radii.end()));
  std::vector<ContentEstimate> out;
  for (double r : radii) {
    const std::size_t count = fps.count_for(r);
    out.push_back({r, static_cast<double>(count) * std::pow(r, s), count});
  }
  return out;
}

double content_slope(const std::vector<ContentEstimate>& series) {
  std::vector<double> r, v;
  for (const auto& e : series) {
    r.push_back(e.resolution);
    v.push_back(e.value);
  }
  return loglog_fit(r, v).slope;
}

bool Cube::intersects(const Cube& other) const {
  const double reach = 0.5 * (edge + other.edge);
  return ((center - other.center).cwiseAbs().array() <= reach).all();
}

bool Cube::contains(const Cube& other) const {
  const double slack = 1e-12 * std::max(1.0, edge);
  return ((center - other.center).cwiseAbs().array() + 0.5 * other.edge <=
          0.5 * edge + slack)
      .all();
}

std::vector<std::size_t> vitali_select(const std::vector<Cube>& cubes) {
  std::vector<std::size_t> order(cubes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cubes[a].edge > cubes[b].edge; });
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    const bool disjoint = std::none_of(kept.begin(), kept.end(), [&](std::size_t j) {
      return cubes[i].intersects(cubes[j]);
    });
    if (disjoint) kept.push_back(i);
  }
  return kept;
}

GridSet::GridSet(int k, double h, VectorXd origin, std::vector<GridIndex> indices)
    : k_(k), h_(h), origin_(std::move(origin)), indices_(std::move(indices)) {
  require(k >= 1, "GridSet: dimension must be >= 1");
  require(h > 0, "GridSet: spacing must be positive");
  require(origin_.size() == k, "GridSet: origin dimension mismatch");
  lookup_.reserve(indices_.size());
  for (const auto& index : indices_) {
    require(index.size() == k, "GridSet: index dimension mismatch");
    require(lookup_.insert(index).second, "GridSet: duplicate cell");
  }
}

GridSet GridSet::box(const VectorXd& lo, const VectorXd& hi, double h) {
  require(lo.size() == hi.size(), "GridSet::box: dimension mismatch");
  const auto k = static_cast<int>(lo.size());
  GridIndex last(k);
  for (int i = 0; i < k; ++i) {
    const double cells = (hi[i] - lo[i]) / h;
    const double rounded = std::round(cells);
    require(rounded >= 1 && std::abs(cells - rounded) < 1e-6,
            "GridSet::box: extent is not a positive multiple of h");
    last[i] = static_cast<int>(rounded) - 1;
  }
  VectorXd origin = lo.array() + 0.5 * h;
  return GridSet(k, h, origin, grid_box(GridIndex::Zero(k), last));
}

double GridSet::cell_volume() const { return std::pow(h_, k_); }

GridIndex GridSet::cell_of(const VectorXd& x) const {
  require(x.size() == k_, "GridSet: point dimension mismatch");
  return ((x - origin_) / h_).array().unaryExpr([](double v) { return std::floor(v + 0.5); })
      .cast<int>()
      .matrix();
}

bool GridSet::contains_point(const VectorXd& x) const { return contains(cell_of(x)); }

bool GridSet::is_box() const {
  if (indices_.empty()) return false;
  GridIndex lo = indices_.front(), hi = indices_.front();
  for (const auto& index : indices_) {
    lo = lo.cwiseMin(index);
    hi = hi.cwiseMax(index);
  }
  std::size_t expected = 1;
  for (int i = 0; i < k_; ++i) expected *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
  return expected == indices_.size();
}

double riesz_ball_constant(int k) {
  require(k >= 1, "riesz_ball_constant: k must be >= 1");
  const double half = 0.5 * k;
  const double sphere = 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
  const double ball = std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
  return sphere / std::pow(ball, 1.0 / k);
}

namespace {

// int_0^a int_0^b (s^2 + t^2)^{-1/2} ds dt, signed by quadrant.
double quadrant_integral(double a, double b) {
  if (a == 0 || b == 0) return 0;
  const double sa = a < 0 ? -1 : 1, sb = b < 0 ? -1 : 1;
  a = std::abs(a);
  b = std::abs(b);
  return sa * sb * (a * std::asinh(b / a) + b * std::asinh(a / b));
}

double kernel(const VectorXd& d, int k) {
  if (k == 1) return 1.0;
  return std::pow(d.norm(), 1.0 - k);
}

// Refines cells that touch x; the innermost cell uses the equal-volume ball value.
double refined_cell_integral(const VectorXd& lo, const VectorXd& hi, const VectorXd& x,
                             int depth) {
  const auto k = static_cast<int>(lo.size());
  const VectorXd mid = 0.5 * (lo + hi);
  const double volume = (hi - lo).prod();
  const bool touches = ((x.array() >= lo.array() - 1e-15) && (x.array() <= hi.array() + 1e-15)).all();
  if (!touches) return volume * kernel(mid - x, k);
  if (depth == 0) return riesz_ball_constant(k) * std::pow(volume, 1.0 / k);
  double total = 0;
  const int children = 1 << k;
  for (int c = 0; c < children; ++c) {
    VectorXd clo(k), chi(k);
    for (int i = 0; i < k; ++i) {
      const bool upper = (c >> i) & 1;
      clo[i] = upper ? mid[i] : lo[i];
      chi[i] = upper ? hi[i] : mid[i];
    }
    total += refined_cell_integral(clo, chi, x, depth - 1);
  }
  return total;
}

// Integral of the kernel over one cell; near x the cell average is used instead of the midpoint.
double cell_weight(const VectorXd& center, double h, const VectorXd& x, bool& regularized) {
  const auto k = static_cast<int>(center.size());
  const double sup = (center - x).cwiseAbs().maxCoeff();
  if (sup <= 0.5 * h * (1 + 1e-12)) regularized = true;
  if (k == 1) return h;
  if (sup > 1.5 * h) return std::pow(h, k) * kernel(center - x, k);
  const VectorXd lo = center.array() - 0.5 * h;
  const VectorXd hi = center.array() + 0.5 * h;
  if (k == 2) return cell_kernel_integral(lo, hi, x);
  return refined_cell_integral(lo, hi, x, 6);
}

}  // namespace

double cell_kernel_integral(const VectorXd& lo, const VectorXd& hi, const VectorXd& x) {
  require(lo.size() == hi.size() && lo.size() == x.size(), "cell_kernel_integral: dimension");
  if (lo.size() == 1) return hi[0] - lo[0];
  require(lo.size() == 2, "cell_kernel_integral: exact form only for k <= 2");
  const double x1 = lo[0] - x[0], x2 = hi[0] - x[0];
  const double y1 = lo[1] - x[1], y2 = hi[1] - x[1];
  return quadrant_integral(x2, y2) - quadrant_integral(x1, y2) - quadrant_integral(x2, y1) +
         quadrant_integral(x1, y1);
}

RieszResult riesz_potential(const GridSet& set, const VectorXd& x) {
  require(x.size() == set.k(), "riesz_potential: point dimension mismatch");
  RieszResult out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    out.value += cell_weight(set.center(i), set.h(), x, out.regularized);
  }
  return out;
}

PoincareResult poincare_deviation(const GridSet& domain, const ScalarField& u, const VectorXd& x) {
  if (!domain.is_box()) {
    throw Error(ErrorKind::unsupported_domain, "poincare_deviation needs a convex (box) domain");
  }
  const int k = domain.k();
  const double h = domain.h();
  require(x.size() == k, "poincare_deviation: point dimension mismatch");

  std::vector<double> samples(domain.size());
  std::unordered_map<GridIndex, std::size_t, GridIndexHash, GridIndexEqual> where;
  where.reserve(domain.size());
  GridIndex lo = domain.indices().front(), hi = lo;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    samples[i] = u(domain.center(i));
    where.emplace(domain.indices()[i], i);
    lo = lo.cwiseMin(domain.indices()[i]);
    hi = hi.cwiseMax(domain.indices()[i]);
  }

  PoincareResult out;
  out.average = std::accumulate(samples.begin(), samples.end(), 0.0) /
                static_cast<double>(samples.size());
  const VectorXd extent = (hi - lo).cast<double>().array() * h + h;
  out.diameter = extent.norm();
  const double volume = extent.prod();

  double integral = 0;
  bool regularized = false;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const GridIndex& index = domain.indices()[i];
    VectorXd grad(k);
    for (int axis = 0; axis < k; ++axis) {
      GridIndex fwd = index, bwd = index;
      fwd[axis] += 1;
      bwd[axis] -= 1;
      auto f = where.find(fwd);
      auto b = where.find(bwd);
      if (f != where.end() && b != where.end()) {
        grad[axis] = (samples[f->second] - samples[b->second]) / (2 * h);
      } else if (f != where.end()) {
        grad[axis] = (samples[f->second] - samples[i]) / h;
      } else if (b != where.end()) {
        grad[axis] = (samples[i] - samples[b->second]) / h;
      } else {
        grad[axis] = 0;
      }
    }
    const double g = grad.norm();
    if (g == 0) continue;
    integral += g * cell_weight(domain.center(i), h, x, regularized);
  }
  out.lhs = std::abs(u(x) - out.average);
  out.rhs = std::pow(out.diameter, k) / (k * volume) * integral;
  return out;
}

double segment_intersection_length(const GridSet& set, const VectorXd& x, const VectorXd& y,
                                   int steps_per_cell) {
  require(steps_per_cell >= 1, "segment_intersection_length: steps_per_cell must be >= 1");
  const double length = (y - x).norm();
  if (length == 0 || set.empty()) return 0;
  const auto steps = static_cast<long>(std::ceil(length / set.h() * steps_per_cell));
  const double dt = 1.0 / static_cast<double>(steps);
  long inside = 0;
  for (long s = 0; s < steps; ++s) {
    const double t = (static_cast<double>(s) + 0.5) * dt;
    if (set.contains_point(x + t * (y - x))) ++inside;
  }
  return length * static_cast<double>(inside) * dt;
}

SegmentStat segment_intersection_stat(const GridSet& set, const Cube& cube, const VectorXd& x,
                                      std::size_t samples, std::uint64_t seed) {
  require(samples >= 100, "segment_intersection_stat: need at least 100 samples");
  require(cube.center.size() == set.k() && x.size() == set.k(),
          "segment_intersection_stat: dimension mismatch");
  const int n = set.k();
  SegmentStat out;
  out.samples = samples;
  out.constant = 2.0 * riesz_ball_constant(n);
  out.threshold = out.constant * std::pow(set.measure(), 1.0 / n);

  std::vector<double> lengths(samples);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  for (std::size_t s = 0; s < samples; ++s) {
    std::mt19937_64 rng(derive_seed(seed, s));
    VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = cube.center[i] + cube.edge * unit(rng);
    lengths[s] = segment_intersection_length(set, x, y);
  }
  std::size_t below = 0;
  for (double v : lengths) {
    if (v <= out.threshold) ++below;
    out.mean += v;
  }
  out.mean /= static_cast<double>(samples);
  out.fraction = static_cast<double>(below) / static_cast<double>(samples);
  auto mid = lengths.begin() + static_cast<long>(samples / 2);
  std::nth_element(lengths.begin(), mid, lengths.end());
  out.median = *mid;
  if (samples % 2 == 0) {
    out.median = 0.5 * (out.median + *std::max_element(lengths.begin(), mid));
  }
  return out;
}

}  // namespace gmt
