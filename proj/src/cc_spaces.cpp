#include "gmt/cc_spaces.hpp"

#include "gmt/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <random>
#include <set>

namespace gmt {

bool Box::contains(const VectorXd& p, double slack) const {
  return p.size() == lo.size() && (p.array() >= lo.array() - slack).all() &&
         (p.array() <= hi.array() + slack).all();
}

VectorFieldSystem::VectorFieldSystem(std::string name, int n, int m, FieldFn fields,
                                     double lipschitz_bound, Box domain, int samples_per_axis)
    : name_(std::move(name)),
      n_(n),
      m_(m),
      fields_(std::move(fields)),
      lipschitz_bound_(lipschitz_bound),
      domain_(std::move(domain)) {
  require(n >= 1 && m >= 1 && m <= n, "VectorFieldSystem: need 1 <= m <= n");
  require(domain_.lo.size() == n && domain_.hi.size() == n, "VectorFieldSystem: box dimension");
  require((domain_.hi.array() > domain_.lo.array()).all(), "VectorFieldSystem: empty box");
  require(lipschitz_bound >= 0, "VectorFieldSystem: negative Lipschitz bound");
  require(samples_per_axis >= 2, "VectorFieldSystem: need at least 2 samples per axis");

  // Keep the sample below ~2e5 points in high dimension.
  const int per_axis = std::max(
      2, std::min(samples_per_axis, static_cast<int>(std::floor(std::pow(2e5, 1.0 / n)))));
  FieldConditioning c;
  c.min_field_norm = std::numeric_limits<double>::infinity();
  c.min_singular = std::numeric_limits<double>::infinity();
  for (const auto& idx : grid_box(GridIndex::Zero(n), GridIndex::Constant(n, per_axis - 1))) {
    const VectorXd p = domain_.lo + (domain_.hi - domain_.lo).cwiseProduct(
                                        idx.cast<double>() / static_cast<double>(per_axis - 1));
    const MatrixXd f = fields_(p);
    require(f.rows() == n && f.cols() == m, "VectorFieldSystem: field matrix must be n x m");
    const VectorXd sigma = Eigen::JacobiSVD<MatrixXd>(f).singularValues();
    c.min_field_norm = std::min(c.min_field_norm, f.colwise().norm().minCoeff());
    c.min_singular = std::min(c.min_singular, sigma[m - 1]);
    c.max_singular = std::max(c.max_singular, sigma[0]);
    ++c.samples;
  }
  if (!(c.min_field_norm > 1e-6) || !(c.min_singular > 1e-9)) {
    throw Error(ErrorKind::degenerate_fields,
                name_ + ": fields degenerate on the box (min |X_i| = " +
                    std::to_string(c.min_field_norm) + ", min singular value = " +
                    std::to_string(c.min_singular) + ")");
  }
  c.constant = std::max(c.max_singular, 1.0 / c.min_singular);
  conditioning_ = c;
}

VectorFieldSystem VectorFieldSystem::euclidean(int n, const Box& domain) {
  return VectorFieldSystem(
      "euclidean", n, n, [n](const VectorXd&) { return MatrixXd::Identity(n, n); }, 0.0, domain);
}

VectorFieldSystem VectorFieldSystem::heisenberg(int n, const Box& domain) {
  const int dim = 2 * n + 1;
  return VectorFieldSystem(
      "heisenberg", dim, 2 * n,
      [n, dim](const VectorXd& p) {
        MatrixXd f = MatrixXd::Zero(dim, 2 * n);
        for (int i = 0; i < n; ++i) {
          f(i, i) = 1;
          f(2 * n, i) = 2 * p[n + i];
          f(n + i, n + i) = 1;
          f(2 * n, n + i) = -2 * p[i];
        }
        return f;
      },
      2.0, domain);
}

VectorFieldSystem VectorFieldSystem::grushin(const Box& domain) {
  return VectorFieldSystem(
      "grushin", 2, 2,
      [](const VectorXd& p) {
        MatrixXd f = MatrixXd::Zero(2, 2);
        f(0, 0) = 1;
        f(1, 1) = p[0];
        return f;
      },
      1.0, domain);
}

VectorFieldSystem system_from_toml(const std::string& text, const std::string& table) {
  const auto tables = parse_toml(text);
  auto it = tables.find(table);
  if (it == tables.end()) throw Error(ErrorKind::usage, "config: no table [" + table + "]");
  const ParamMap& params = it->second;
  const std::string name = param_string(params, "name");
  const std::vector<double> lo = param_list(params, "box_lo");
  const std::vector<double> hi = param_list(params, "box_hi");
  const Box box{Eigen::Map<const VectorXd>(lo.data(), static_cast<Index>(lo.size())),
                Eigen::Map<const VectorXd>(hi.data(), static_cast<Index>(hi.size()))};
  if (name == "euclidean") return VectorFieldSystem::euclidean(static_cast<int>(param_int(params, "n")), box);
  if (name == "heisenberg") return VectorFieldSystem::heisenberg(static_cast<int>(param_int(params, "n")), box);
  if (name == "grushin") return VectorFieldSystem::grushin(box);
  throw Error(ErrorKind::usage, "config: unknown vector field system '" + name + "'");
}

HorizontalPathG integrate_path(const VectorFieldSystem& system, const VectorXd& start,
                               const MatrixXd& controls, int substeps) {
  require(start.size() == system.n(), "integrate_path: start has wrong dimension");
  require(controls.rows() == system.m(), "integrate_path: controls must have m rows");
  require(substeps >= 1, "integrate_path: need at least one substep");
  HorizontalPathG path;
  path.controls = controls;
  path.start = start;
  path.substeps = substeps;
  const Index steps = controls.cols();
  const double dt = steps > 0 ? 1.0 / static_cast<double>(steps) : 0.0;
  const double h = dt / substeps;
  VectorXd p = start;
  path.positions.push_back(p);
  path.fine_positions.push_back(p);
  path.times.push_back(0.0);
  for (Index j = 0; j < steps; ++j) {
    const VectorXd a = controls.col(j);
    for (int s = 0; s < substeps; ++s) {
      const VectorXd mid = p + 0.5 * h * (system.fields(p) * a);
      p += h * (system.fields(mid) * a);
      path.fine_positions.push_back(p);
    }
    path.positions.push_back(p);
    path.times.push_back(static_cast<double>(j + 1) * dt);
  }
  return path;
}

double horizontal_norm(const VectorFieldSystem& system, const VectorXd& p, const VectorXd& v) {
  require(v.size() == system.n(), "horizontal_norm: vector has wrong dimension");
  const MatrixXd f = system.fields(p);
  const VectorXd a = f.colPivHouseholderQr().solve(v);
  const double residual = (f * a - v).norm();
  if (residual > 1e-9 * std::max(1.0, v.norm())) {
    throw Error(ErrorKind::not_horizontal, "vector leaves the horizontal span by " + std::to_string(residual));
  }
  return a.norm();
}

double horizontal_length(const HorizontalPathG& path) { return control_length(path.controls); }

double euclidean_length(const HorizontalPathG& path) {
  double total = 0;
  for (std::size_t i = 1; i < path.fine_positions.size(); ++i) {
    total += (path.fine_positions[i] - path.fine_positions[i - 1]).norm();
  }
  return total;
}

CcGeneralResult cc_distance_general(const VectorFieldSystem& system, const VectorXd& p,
                                    const VectorXd& q, const CcGeneralOptions& options) {
  require(p.size() == system.n() && q.size() == system.n(), "cc_distance_general: dimension mismatch");
  require(options.segments >= 1, "cc_distance_general: need at least one segment");
  const Box& box = system.domain();
  require(box.contains(p, 1e-12) && box.contains(q, 1e-12), "cc_distance_general: endpoint outside domain");
  CcGeneralResult out;
  out.seed = options.seed;
  if (p == q) {
    out.path = integrate_path(system, p, MatrixXd::Zero(system.m(), options.segments), options.substeps);
    return out;
  }

  ControlProblem problem;
  problem.control_dim = system.m();
  problem.segments = options.segments;
  problem.start = p;
  problem.target = q;
  problem.scale = box.diameter();
  const int substeps = options.substeps;
  problem.integrate = [&system, p, substeps](const MatrixXd& controls) {
    return integrate_path(system, p, controls, substeps).positions;
  };
  problem.violation = [&box](const std::vector<VectorXd>& positions) {
    VectorXd v(static_cast<Index>(positions.size()) * box.dim());
    for (std::size_t i = 0; i < positions.size(); ++i) {
      v.segment(static_cast<Index>(i) * box.dim(), box.dim()) =
          (box.lo - positions[i]).cwiseMax(positions[i] - box.hi).cwiseMax(0.0);
    }
    return v;
  };
  ControlOptions copt;
  copt.restarts = options.restarts;
  copt.seed = options.seed;
  // Constant controls along the least-squares direction at p.
  const VectorXd a = system.fields(p).colPivHouseholderQr().solve(q - p);
  MatrixXd straight(system.m(), options.segments);
  straight.colwise() = a;
  copt.initial_guesses.push_back(straight);

  const ControlResult result = optimize_controls(problem, copt);
  out.upper = result.length;
  out.residual = result.residual;
  out.restart_lengths = result.restart_lengths;
  out.best_so_far = result.best_so_far;
  out.path = integrate_path(system, p, result.controls, options.substeps);
  return out;
}

MetricOracle cc_metric(const VectorFieldSystem& system, const CcGeneralOptions& options) {
  return {PointKind::cc, [system, options](const VectorXd& a, const VectorXd& b) {
            return cc_distance_general(system, a, b, options).upper;
          }};
}

BldReport weak_bld_estimate(const VectorMap& phi, const std::vector<HorizontalPathG>& curves, double bound) {
  require(bound >= 1, "weak_bld_estimate: bound C must be >= 1");
  BldReport out;
  out.bound = bound;
  out.ratio_min = std::numeric_limits<double>::infinity();
  for (const auto& curve : curves) {
    const double lx = horizontal_length(curve);
    if (!(lx > 0)) {
      ++out.skipped;
      continue;
    }
    double ly = 0;
    VectorXd previous = phi(curve.fine_positions.front());
    for (std::size_t i = 1; i < curve.fine_positions.size(); ++i) {
      VectorXd current = phi(curve.fine_positions[i]);
      ly += (current - previous).norm();
      previous = std::move(current);
    }
    const double ratio = ly / lx;
    out.ratio_min = std::min(out.ratio_min, ratio);
    out.ratio_max = std::max(out.ratio_max, ratio);
    ++out.curves;
  }
  require(out.curves > 0, "weak_bld_estimate: no curve of positive length");
  out.c_phi = out.ratio_min > 0 ? 1.0 / out.ratio_min : std::numeric_limits<double>::infinity();
  out.implied_constant = std::max(out.ratio_max, out.c_phi);
  out.passed = out.ratio_max <= bound * (1 + 1e-12) && out.ratio_min >= (1 - 1e-12) / bound;
  return out;
}

QuasiconvexityReport quasiconvexity_probe(const MetricOracle& metric, const std::vector<VectorXd>& points,
                                          std::size_t budget, const PathFinder& finder,
                                          std::uint64_t seed) {
  require(budget >= 10, "quasiconvexity_probe: pair budget must be >= 10");
  require(points.size() >= 2, "quasiconvexity_probe: need at least two points");
  QuasiconvexityReport out;
  const std::size_t n = points.size();
  const std::size_t all = n * (n - 1) / 2;
  if (all <= budget) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) out.pairs.emplace_back(i, j);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    while (out.pairs.size() < budget) {
      std::size_t i = pick(rng), j = pick(rng);
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      if (seen.insert({i, j}).second) out.pairs.emplace_back(i, j);
    }
  }
  for (const auto& [i, j] : out.pairs) {
    const double d = metric(points[i], points[j]);
    std::optional<FoundPath> path;
    try {
      path = finder(points[i], points[j]);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::no_path_found) throw;
    }
    out.distances.push_back(d);
    out.lengths.push_back(path ? path->length : std::numeric_limits<double>::infinity());
    out.failed.push_back(!path);
    if (!path) {
      ++out.failures;
    } else if (d > 0) {
      out.m = std::max(out.m, path->length / d);
    }
  }
  return out;
}

namespace {

bool segment_inside(const std::function<bool(const VectorXd&)>& inside, const VectorXd& a,
                    const VectorXd& b, double step) {
  const int n = std::max(1, static_cast<int>(std::ceil((b - a).norm() / step)));
  for (int i = 0; i <= n; ++i) {
    if (!inside(a + (b - a) * (static_cast<double>(i) / n))) return false;
  }
  return true;
}

double polyline_length(const std::vector<VectorXd>& points) {
  double total = 0;
  for (std::size_t i = 1; i < points.size(); ++i) total += (points[i] - points[i - 1]).norm();
  return total;
}

}  // namespace

PathFinder straight_path_finder(std::function<bool(const VectorXd&)> inside) {
  return [inside = std::move(inside)](const VectorXd& x, const VectorXd& y) -> std::optional<FoundPath> {
    const double step = std::max((y - x).norm(), 1e-12) / 256;
    if (!segment_inside(inside, x, y, step)) return std::nullopt;
    return FoundPath{{x, y}, (y - x).norm()};
  };
}

PathFinder grid_path_finder(std::function<bool(const VectorXd&)> inside, Box box, double resolution) {
  require(resolution > 0, "grid_path_finder: resolution must be positive");
  const Index dim = box.dim();
  GridIndex counts(dim);
  for (Index a = 0; a < dim; ++a) {
    counts[a] = static_cast<int>(std::floor((box.hi[a] - box.lo[a]) / resolution + 1e-9)) + 1;
  }
  auto nodes = std::make_shared<std::vector<VectorXd>>();
  auto lookup = std::make_shared<std::unordered_map<GridIndex, std::size_t, GridIndexHash, GridIndexEqual>>();
  auto lattice = std::make_shared<std::vector<GridIndex>>();
  for (const auto& idx : grid_box(GridIndex::Zero(dim), counts - GridIndex::Ones(dim))) {
    const VectorXd p = box.lo + resolution * idx.cast<double>();
    if (!inside(p)) continue;
    (*lookup)[idx] = nodes->size();
    nodes->push_back(p);
    lattice->push_back(idx);
  }
  std::vector<GridIndex> directions;
  for (const auto& d : grid_box(GridIndex::Constant(dim, -1), GridIndex::Constant(dim, 1))) {
    if (!d.isZero()) directions.push_back(d);
  }

  return [=](const VectorXd& x, const VectorXd& y) -> std::optional<FoundPath> {
    const double step = resolution / 8;
    if (!inside(x) || !inside(y)) return std::nullopt;
    if (segment_inside(inside, x, y, step)) return FoundPath{{x, y}, (y - x).norm()};

    // Graph: lattice nodes, then x (id N) and y (id N + 1).
    const std::size_t count = nodes->size();
    const std::size_t sx = count, sy = count + 1;
    auto attach = [&](const VectorXd& p) {
      std::vector<std::pair<std::size_t, double>> links;
      for (std::size_t i = 0; i < count; ++i) {
        const double d = ((*nodes)[i] - p).norm();
        if (d <= 2 * resolution && segment_inside(inside, p, (*nodes)[i], step)) links.emplace_back(i, d);
      }
      return links;
    };
    const auto from_x = attach(x);
    const auto to_y = attach(y);
    std::vector<double> to_y_cost(count, -1);
    for (const auto& [i, d] : to_y) to_y_cost[i] = d;

    std::vector<double> dist(count + 2, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> prev(count + 2, count + 2);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[sx] = 0;
    for (const auto& [i, d] : from_x) {
      if (d < dist[i]) {
        dist[i] = d;
        prev[i] = sx;
        queue.emplace(d, i);
      }
    }
    while (!queue.empty()) {
      const auto [d, u] = queue.top();
      queue.pop();
      if (d > dist[u] || u == sy) continue;
      if (to_y_cost[u] >= 0 && d + to_y_cost[u] < dist[sy]) {
        dist[sy] = d + to_y_cost[u];
        prev[sy] = u;
        queue.emplace(dist[sy], sy);
      }
      for (const auto& dir : directions) {
        auto it = lookup->find((*lattice)[u] + dir);
        if (it == lookup->end()) continue;
        const std::size_t v = it->second;
        const double w = resolution * dir.cast<double>().norm();
        if (d + w < dist[v] && segment_inside(inside, (*nodes)[u], (*nodes)[v], step)) {
          dist[v] = d + w;
          prev[v] = u;
          queue.emplace(dist[v], v);
        }
      }
    }
    if (!std::isfinite(dist[sy])) return std::nullopt;

    std::vector<VectorXd> chain{y};
    for (std::size_t u = prev[sy]; u != sx; u = prev[u]) chain.push_back((*nodes)[u]);
    chain.push_back(x);
    std::reverse(chain.begin(), chain.end());

    // String pulling: jump to the farthest visible vertex.
    std::vector<VectorXd> pulled{chain.front()};
    std::size_t i = 0;
    while (i + 1 < chain.size()) {
      std::size_t j = chain.size() - 1;
      while (j > i + 1 && !segment_inside(inside, chain[i], chain[j], step)) --j;
      pulled.push_back(chain[j]);
      i = j;
    }
    return FoundPath{pulled, polyline_length(pulled)};
  };
}

PathFinder cc_path_finder(const VectorFieldSystem& system, const CcGeneralOptions& options) {
  return [system, options](const VectorXd& x, const VectorXd& y) -> std::optional<FoundPath> {
    const CcGeneralResult r = cc_distance_general(system, x, y, options);
    return FoundPath{r.path.fine_positions, r.upper};
  };
}

}  // namespace gmt
