#pragma once

#include "gmt/measure.hpp"
#include "gmt/metric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gmt {

/// Count of singular values above tol * sigma_max (0 for the zero matrix).
template <typename Derived>
int numerical_rank(const Eigen::MatrixBase<Derived>& m, double tol) {
  require(tol > 0 && tol < 1, "numerical_rank: tol must lie in (0,1)");
  if (m.size() == 0) return 0;
  using Scalar = typename Derived::Scalar;
  const MatrixX<Scalar> dense = m;
  const auto sigma = Eigen::JacobiSVD<MatrixX<Scalar>>(dense).singularValues();
  if (sigma.size() == 0 || sigma[0] == Scalar(0)) return 0;
  int rank = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > Scalar(tol) * sigma[0]) ++rank;
  }
  return rank;
}

struct JetOptions {
  double rho = 0;            // fitting radius; 0 means 3h
  double rank_tol = 1e-6;    // relative singular-value threshold
  int order = 2;             // 1: affine fit, 2: fit includes quadratic terms
  double min_fill = 0.6;     // density-point proxy: fraction of the lattice ball present
  double residual_threshold = 1e-2;
};

/// Estimated approximate derivative of a sampled map into R^N at one grid point.
struct ApproxJet {
  VectorXd base;
  MatrixXd derivative;  // N x k, row i = gradient of component i
  VectorXd singular_values;
  int rank = 0;  // singular values above rank_tol * sigma_max and above the rounding floor
  double residual = 0;  // max fit residual over the neighborhood divided by rho
  std::size_t neighbors = 0;
};

/// Least-squares jet over E cap B(x, rho). Values are read as coordinates in R^N.
/// Throws insufficient_density when the neighborhood is too sparse or degenerate.
ApproxJet approx_jet(const SampledMap& f, std::size_t point, const JetOptions& options = {});

struct Stratification {
  int k = 0;
  std::vector<std::vector<std::size_t>> strata;  // strata[j] = K_j for j < k
  std::vector<std::size_t> regular;              // rank k
  std::vector<std::size_t> unresolved;
  std::vector<int> labels;  // per grid point: rank, or -1 when unresolved

  std::size_t size() const { return labels.size(); }
};

Stratification stratify_critical(const SampledMap& f, const JetOptions& options = {});

/// Integer multiplicity counts N_g(y, E) on a target grid of the given resolution.
struct Multiplicity {
  double resolution = 0;
  std::unordered_map<GridIndex, int, GridIndexHash, GridIndexEqual> counts;

  /// int N_g dy approximated by sum of counts times resolution^k.
  double integral(int k) const;
};

/// Rasterizes the piecewise-linear interpolant of g (domain cells split into simplices) onto a
/// target grid; only for k = m <= 2.
Multiplicity multiplicity_estimate(const SampledMap& g, double resolution);

struct AreaOptions {
  double target_resolution = 0;  // 0 means the domain spacing
  JetOptions jets;
  std::optional<JacobianMap> jacobian;  // analytic Jacobian, m x k
  double max_unresolved_fraction = 0.01;
};

struct AreaCheck {
  double lhs = 0;  // int_E |J_g|
  double rhs = 0;  // int N_g(y, E) dy
  double gap = 0;  // |lhs - rhs| / max(lhs, 1e-12)
  std::size_t unresolved = 0;
  bool analytic_jacobian = false;
};

/// Compares both sides of the area formula on a node grid. For m > k the right-hand side is
/// the multiplicity-weighted area of the image simplices.
AreaCheck area_formula_check(const SampledMap& g, const AreaOptions& options = {});

struct StraighteningOptions {
  double initial_radius = 1.0;
  double min_radius = 1e-6;
  double tolerance = 1e-8;
  int test_points = 25;
  int newton_iterations = 60;
  double fd_step = 1e-6;
  double minor_tolerance = 1e-10;
  std::uint64_t seed = 7;
};

/// H(u) = (g~_1(u), ..., g~_j(u), u_{j+1}, ..., u_k) where g~ is g moved so that x0 -> 0,
/// g(x0) -> 0, with the given coordinate permutations applied; plus a Newton inverse of H.
class Straightening {
 public:
  Straightening(VectorMap g, VectorXd x0, int j, std::vector<int> domain_perm,
                std::vector<int> target_perm, StraighteningOptions options,
                std::optional<JacobianMap> jacobian);

  /// g~ in straightened coordinates.
  VectorXd normalized(const VectorXd& u) const;
  MatrixXd normalized_jacobian(const VectorXd& u) const;
  VectorXd forward(const VectorXd& u) const;
  /// Damped Newton solve of H(u) = w from the linearization; throws newton_divergence.
  VectorXd inverse(const VectorXd& w) const;
  /// (g~ o H^{-1})(w); its first j coordinates equal w_1..w_j.
  VectorXd straightened(const VectorXd& w) const;

  int j() const { return j_; }
  int k() const { return static_cast<int>(x0_.size()); }
  double radius() const { return radius_; }
  /// Max over test points of |(g~ o H^{-1})_i(w) - w_i|, i <= j.
  double max_residual() const { return max_residual_; }
  const std::vector<VectorXd>& test_points() const { return test_points_; }

 private:
  double residual_on_ball(double radius, std::vector<VectorXd>* points) const;

  VectorMap g_;
  std::optional<JacobianMap> jacobian_;
  VectorXd x0_;
  VectorXd g0_;
  int j_;
  std::vector<int> domain_perm_;
  std::vector<int> target_perm_;
  StraighteningOptions options_;
  MatrixXd linear_inverse_;
  double radius_ = 0;
  double max_residual_ = 0;
  std::vector<VectorXd> test_points_;
};

Straightening straightening_map(VectorMap g, VectorXd x0, int j, std::vector<int> domain_perm = {},
                                std::vector<int> target_perm = {},
                                const StraighteningOptions& options = {},
                                std::optional<JacobianMap> jacobian = std::nullopt);

struct CriticalCoverOptions {
  std::optional<double> constant;  // fixed C; empirical when absent
  std::string failure_csv;         // dump points outside their ball here when non-empty
};

struct CriticalCover {
  Cover cover;
  double constant = 0;   // C in radius = C * L * d / m
  double lipschitz = 0;  // L
  double edge = 0;       // d
  int m = 0;
  int j = 0;
  std::size_t covered_points = 0;
  std::size_t failures = 0;
  std::vector<std::size_t> fibers;  // representative grid point per box
};

/// Covers f(K_j cap Q) by m^j balls, one per box Q_nu x [0,d]^{k-j}, centered on the image of
/// the box's emptiest fiber. The domain grid must be a full cube with g_i(x) = x_i for i <= j.
CriticalCover critical_cover(const SampledMap& f, const Stratification& strata, int j, int m,
                             const CriticalCoverOptions& options = {});

}  // namespace gmt
