#include "gmt/jets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace gmt {

namespace {

std::vector<int> identity_perm(std::size_t n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

void check_perm(const std::vector<int>& p, std::size_t n, const char* what) {
  require(p.size() == n, std::string("straightening: ") + what + " permutation has wrong size");
  std::vector<int> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  require(sorted == identity_perm(n), std::string("straightening: ") + what + " is not a permutation");
}

}  // namespace

Straightening::Straightening(VectorMap g, VectorXd x0, int j, std::vector<int> domain_perm,
                             std::vector<int> target_perm, StraighteningOptions options,
                             std::optional<JacobianMap> jacobian)
    : g_(std::move(g)),
      jacobian_(std::move(jacobian)),
      x0_(std::move(x0)),
      j_(j),
      domain_perm_(std::move(domain_perm)),
      target_perm_(std::move(target_perm)),
      options_(options) {
  const int k = static_cast<int>(x0_.size());
  require(k >= 1, "straightening: empty base point");
  require(j >= 1 && j <= k, "straightening: need 1 <= j <= k");
  require(options_.test_points >= 1, "straightening: need at least one test point");
  require(options_.min_radius > 0 && options_.initial_radius >= options_.min_radius,
          "straightening: bad radius bounds");
  g0_ = g_(x0_);
  require(g0_.size() >= j, "straightening: target dimension below j");
  if (domain_perm_.empty()) domain_perm_ = identity_perm(static_cast<std::size_t>(k));
  if (target_perm_.empty()) target_perm_ = identity_perm(static_cast<std::size_t>(g0_.size()));
  check_perm(domain_perm_, static_cast<std::size_t>(k), "domain");
  check_perm(target_perm_, static_cast<std::size_t>(g0_.size()), "target");

  const MatrixXd jac0 = normalized_jacobian(VectorXd::Zero(k));
  const VectorXd sigma = Eigen::JacobiSVD<MatrixXd>(jac0.topLeftCorner(j, j)).singularValues();
  const double scale = std::max(1.0, jac0.cwiseAbs().maxCoeff());
  if (sigma[j - 1] <= options_.minor_tolerance * scale) {
    throw Error(ErrorKind::needs_permutation, "leading j x j minor is singular at x0");
  }
  MatrixXd jh = MatrixXd::Identity(k, k);
  jh.topRows(j) = jac0.topRows(j);
  linear_inverse_ = jh.inverse();

  double good = options_.initial_radius;
  while (residual_on_ball(good, nullptr) > options_.tolerance) {
    good /= 2;
    if (good < options_.min_radius) {
      throw Error(ErrorKind::newton_divergence, "no ball of radius >= min_radius inverts H");
    }
  }
  if (good < options_.initial_radius) {
    double bad = 2 * good;
    for (int step = 0; step < 8; ++step) {
      const double mid = 0.5 * (good + bad);
      (residual_on_ball(mid, nullptr) <= options_.tolerance ? good : bad) = mid;
    }
  }
  radius_ = good;
  max_residual_ = residual_on_ball(radius_, &test_points_);
}

VectorXd Straightening::normalized(const VectorXd& u) const {
  require(u.size() == x0_.size(), "straightening: point has wrong dimension");
  VectorXd x = x0_;
  for (Index i = 0; i < u.size(); ++i) x[domain_perm_[static_cast<std::size_t>(i)]] += u[i];
  const VectorXd y = g_(x) - g0_;
  VectorXd out(y.size());
  for (Index i = 0; i < y.size(); ++i) out[i] = y[target_perm_[static_cast<std::size_t>(i)]];
  return out;
}

MatrixXd Straightening::normalized_jacobian(const VectorXd& u) const {
  const auto k = static_cast<Index>(x0_.size());
  const auto n = static_cast<Index>(g0_.size());
  MatrixXd out(n, k);
  if (jacobian_) {
    VectorXd x = x0_;
    for (Index i = 0; i < k; ++i) x[domain_perm_[static_cast<std::size_t>(i)]] += u[i];
    const MatrixXd d = (*jacobian_)(x);
    require(d.rows() == n && d.cols() == k, "straightening: jacobian has wrong shape");
    for (Index r = 0; r < n; ++r) {
      for (Index c = 0; c < k; ++c) {
        out(r, c) = d(target_perm_[static_cast<std::size_t>(r)], domain_perm_[static_cast<std::size_t>(c)]);
      }
    }
    return out;
  }
  const double step = options_.fd_step;
  for (Index c = 0; c < k; ++c) {
    VectorXd up = u, down = u;
    up[c] += step;
    down[c] -= step;
    out.col(c) = (normalized(up) - normalized(down)) / (2 * step);
  }
  return out;
}

VectorXd Straightening::forward(const VectorXd& u) const {
  VectorXd h = u;
  h.head(j_) = normalized(u).head(j_);
  return h;
}

VectorXd Straightening::inverse(const VectorXd& w) const {
  const auto k = static_cast<Index>(x0_.size());
  require(w.size() == k, "straightening: point has wrong dimension");
  const double target = 1e-14 * std::max(1.0, w.norm());
  VectorXd u = linear_inverse_ * w;
  VectorXd r = forward(u) - w;
  for (int it = 0; it < options_.newton_iterations && r.norm() > target; ++it) {
    MatrixXd jh = MatrixXd::Identity(k, k);
    jh.topRows(j_) = normalized_jacobian(u).topRows(j_);
    const VectorXd delta = jh.partialPivLu().solve(r);
    if (!delta.allFinite()) break;
    double t = 1;
    VectorXd candidate = u - delta;
    VectorXd rc = forward(candidate) - w;
    while (!(rc.norm() < r.norm()) && t > 1.0 / 1024) {
      t /= 2;
      candidate = u - t * delta;
      rc = forward(candidate) - w;
    }
    if (!(rc.norm() < r.norm())) break;
    u = candidate;
    r = rc;
  }
  if (!(r.norm() <= std::max(target, 1e-12 * std::max(1.0, w.norm())))) {
    throw Error(ErrorKind::newton_divergence,
                "Newton stalled at residual " + std::to_string(r.norm()));
  }
  return u;
}

VectorXd Straightening::straightened(const VectorXd& w) const { return normalized(inverse(w)); }

double Straightening::residual_on_ball(double radius, std::vector<VectorXd>* points) const {
  const auto k = static_cast<Index>(x0_.size());
  std::mt19937_64 rng(options_.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  std::vector<VectorXd> sample{VectorXd::Zero(k)};
  while (static_cast<int>(sample.size()) < options_.test_points) {
    VectorXd dir(k);
    for (Index i = 0; i < k; ++i) dir[i] = normal(rng);
    if (dir.norm() == 0) continue;
    sample.push_back(dir.normalized() * radius * std::pow(uniform(rng), 1.0 / static_cast<double>(k)));
  }
  double worst = 0;
  for (const auto& w : sample) {
    try {
      const VectorXd s = straightened(w);
      worst = std::max(worst, (s.head(j_) - w.head(j_)).cwiseAbs().maxCoeff());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::newton_divergence) throw;
      worst = std::numeric_limits<double>::infinity();
      break;
    }
  }
  if (points) *points = std::move(sample);
  return worst;
}

Straightening straightening_map(VectorMap g, VectorXd x0, int j, std::vector<int> domain_perm,
                                std::vector<int> target_perm, const StraighteningOptions& options,
                                std::optional<JacobianMap> jacobian) {
  return Straightening(std::move(g), std::move(x0), j, std::move(domain_perm), std::move(target_perm),
                       options, std::move(jacobian));
}

}  // namespace gmt
