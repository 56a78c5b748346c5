#include "gmt/heisenberg.hpp"

#include "gmt/control.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace gmt {

namespace {

double symplectic(const VectorXd& z, const VectorXd& w) {
  const Index n = z.size() / 2;
  return (z.tail(n).cwiseProduct(w.head(n)) - z.head(n).cwiseProduct(w.tail(n))).sum();
}

void check_same(const HPoint& p, const HPoint& q) {
  require(p.z.size() == q.z.size(), "heisenberg: dimension mismatch");
  require(p.z.size() % 2 == 0 && p.z.size() > 0, "heisenberg: z must have even positive length");
}

// Straight line plus both orientations of a loop in the first complex pair.
std::vector<MatrixXd> loop_guesses(const HPoint& w, int segments) {
  const Index dim = w.z.size();
  const Index n = dim / 2;
  std::vector<MatrixXd> guesses;
  MatrixXd line(dim, segments);
  line.colwise() = w.z;
  guesses.push_back(line);
  const double speed = std::sqrt(std::numbers::pi * std::max(std::abs(w.t), 1e-12));
  for (double orientation : {-1.0, 1.0}) {
    MatrixXd loop = line;
    for (int j = 0; j < segments; ++j) {
      const double theta = 2 * std::numbers::pi * (j + 0.5) / segments;
      loop(0, j) += speed * std::cos(theta);
      loop(n, j) += orientation * speed * std::sin(theta);
    }
    guesses.push_back(loop);
  }
  return guesses;
}

CcBounds cc_upper(const HPoint& p, const HPoint& q, const CcOptions& options) {
  check_same(p, q);
  require(options.segments >= 8, "cc_distance_h: need at least 8 segments");
  CcBounds out;
  const HPoint w = h_group(h_inverse(p), q);
  if (w.z.isZero(0) && w.t == 0) {
    out.path = integrate_h(p, MatrixXd::Zero(w.z.size(), options.segments));
    return out;
  }
  ControlProblem problem;
  problem.control_dim = static_cast<int>(w.z.size());
  problem.segments = options.segments;
  problem.start = HPoint::identity(w.n()).to_vector();
  problem.target = w.to_vector();
  problem.scale = std::max(koranyi_gauge(w), 1e-300);
  const HPoint origin = HPoint::identity(w.n());
  problem.integrate = [origin](const MatrixXd& controls) {
    const HorizontalPathH path = integrate_h(origin, controls);
    std::vector<VectorXd> positions;
    positions.reserve(path.positions.size());
    for (const auto& x : path.positions) positions.push_back(x.to_vector());
    return positions;
  };
  // t_end = 2 dt^2 sum_{i<j} omega(a_i, a_j), so d t_end / d a_j = 2 dt^2 J (S_{<j} - S_{>j})
  // with J(x, y) = (y, -x) and S the partial sums of the controls.
  problem.endpoint_jacobian = [](const MatrixXd& controls) {
    const Index dim = controls.rows(), steps = controls.cols();
    const Index n = dim / 2;
    const double dt = 1.0 / static_cast<double>(steps);
    MatrixXd jac = MatrixXd::Zero(dim + 1, dim * steps);
    const VectorXd total = controls.rowwise().sum();
    VectorXd before = VectorXd::Zero(dim);
    for (Index j = 0; j < steps; ++j) {
      const VectorXd diff = 2 * before + controls.col(j) - total;  // S_{<j} - S_{>j}
      auto block = jac.middleCols(j * dim, dim);
      block.topRows(dim).diagonal().setConstant(dt);
      block(dim, Eigen::seqN(0, n)) = 2 * dt * dt * diff.tail(n).transpose();
      block(dim, Eigen::seqN(n, n)) = -2 * dt * dt * diff.head(n).transpose();
      before += controls.col(j);
    }
    return jac;
  };
  ControlOptions copt;
  copt.restarts = options.restarts;
  copt.seed = options.seed;
  copt.initial_guesses = loop_guesses(w, options.segments);
  const ControlResult result = optimize_controls(problem, copt);
  out.upper = result.length;
  out.path = integrate_h(p, result.controls);
  return out;
}

}  // namespace

VectorXd HPoint::to_vector() const {
  VectorXd v(z.size() + 1);
  v << z, t;
  return v;
}

HPoint HPoint::from_vector(const VectorXd& v) {
  require(v.size() >= 3 && v.size() % 2 == 1, "HPoint: vector length must be 2n+1");
  return {v.head(v.size() - 1), v[v.size() - 1]};
}

HPoint h_group(const HPoint& p, const HPoint& q) {
  check_same(p, q);
  return {p.z + q.z, p.t + q.t + 2 * symplectic(p.z, q.z)};
}

HPoint h_inverse(const HPoint& p) { return {-p.z, -p.t}; }

HPoint h_dilate(const HPoint& p, double r) {
  require(r > 0, "h_dilate: r must be positive");
  return {r * p.z, r * r * p.t};
}

double koranyi_gauge(const HPoint& p) {
  const double z2 = p.z.squaredNorm();
  return std::pow(z2 * z2 + p.t * p.t, 0.25);
}

double koranyi_distance(const HPoint& p, const HPoint& q) {
  return koranyi_gauge(h_group(h_inverse(p), q));
}

MetricOracle koranyi_metric() {
  return {PointKind::heisenberg, [](const VectorXd& a, const VectorXd& b) {
            return koranyi_distance(HPoint::from_vector(a), HPoint::from_vector(b));
          }};
}

double HorizontalPathH::length() const { return control_length(controls); }

HorizontalPathH integrate_h(const HPoint& start, const MatrixXd& controls) {
  require(controls.rows() == start.z.size(), "integrate_h: controls must have 2n rows");
  const Index steps = controls.cols();
  HorizontalPathH path;
  path.controls = controls;
  path.start = start;
  path.positions.reserve(static_cast<std::size_t>(steps + 1));
  path.positions.push_back(start);
  path.times.push_back(0.0);
  const double dt = steps > 0 ? 1.0 / static_cast<double>(steps) : 0.0;
  for (Index j = 0; j < steps; ++j) {
    path.positions.push_back(h_group(path.positions.back(), {controls.col(j) * dt, 0.0}));
    path.times.push_back(static_cast<double>(j + 1) * dt);
  }
  return path;
}

CcBounds cc_distance_h(const HPoint& p, const HPoint& q, const CcOptions& options) {
  CcBounds out = cc_upper(p, q, options);
  out.lower = koranyi_distance(p, q) / bilipschitz_constant(p.n()).value;
  return out;
}

const BilipschitzConstant& bilipschitz_constant(int n) {
  require(n >= 1, "bilipschitz_constant: n must be positive");
  static std::mutex mutex;
  static std::map<int, BilipschitzConstant> cache;
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  // d_cc(0, .) and d_K(0, .) are both invariant under rotations of z preserving the symplectic
  // form and under t -> -t, so a meridian of the gauge sphere is a complete sample.
  constexpr int samples = 17;
  BilipschitzConstant c;
  c.min_ratio = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const double phi = 0.5 * std::numbers::pi * s / (samples - 1);
    HPoint q = HPoint::identity(n);
    q.z[0] = std::sqrt(std::max(std::cos(phi), 0.0));
    q.t = std::sin(phi);
    const double ratio = cc_upper(HPoint::identity(n), q, {}).upper / koranyi_gauge(q);
    c.min_ratio = std::min(c.min_ratio, ratio);
    c.max_ratio = std::max(c.max_ratio, ratio);
  }
  c.samples = samples;
  c.value = std::max(c.max_ratio, 1.0 / c.min_ratio);
  return cache.emplace(n, c).first->second;
}

std::vector<ProfileRow> h_lipschitz_profile(const SampledMap& f, int levels) {
  require(levels >= 1, "h_lipschitz_profile: need at least one level");
  std::vector<ProfileRow> rows;
  for (int l = 0; l < levels; ++l) {
    const int offset = 1 << l;
    ProfileRow row;
    row.scale = offset * f.h();
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (int a = 0; a < f.k(); ++a) {
        GridIndex other = f.index(i);
        other[a] += offset;
        if (auto j = f.find(other)) {
          row.max_ratio = std::max(row.max_ratio, f.target()(f.value(i), f.value(*j)) / row.scale);
        }
      }
    }
    rows.push_back(row);
  }
  return rows;
}

double profile_slope(const std::vector<ProfileRow>& profile) {
  std::vector<double> x, y;
  for (const auto& row : profile) {
    x.push_back(row.scale);
    y.push_back(row.max_ratio);
  }
  return loglog_fit(x, y).slope;
}

LowRankReport low_rank_check(const SampledMap& f, const JetOptions& options) {
  const Stratification strata = stratify_critical(f, options);
  LowRankReport out;
  out.rank_counts.assign(static_cast<std::size_t>(f.k() + 1), 0);
  for (int label : strata.labels) {
    if (label < 0) {
      ++out.unresolved;
      continue;
    }
    ++out.resolved;
    ++out.rank_counts[static_cast<std::size_t>(label)];
    out.max_rank = std::max(out.max_rank, label);
  }
  return out;
}

}  // namespace gmt
