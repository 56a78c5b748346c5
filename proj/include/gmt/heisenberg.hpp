#pragma once

#include "gmt/jets.hpp"
#include "gmt/metric.hpp"

#include <cstdint>
#include <vector>

namespace gmt {

/// Element (z, t) of H^n with z = (x_1..x_n, y_1..y_n).
struct HPoint {
  VectorXd z;
  double t = 0;

  int n() const { return static_cast<int>(z.size() / 2); }
  static HPoint identity(int n) { return {VectorXd::Zero(2 * n), 0.0}; }
  /// [z..., t]
  VectorXd to_vector() const;
  static HPoint from_vector(const VectorXd& v);
};

/// Conventions written into every report header.
inline constexpr const char* kGroupLaw =
    "(z,t)(w,s) = (z+w, t+s+2*sum_i(y_i*u_i - x_i*v_i)), z=(x,y), w=(u,v)";
inline constexpr const char* kGauge = "|(z,t)| = (|z|^4 + t^2)^(1/4), d(p,q) = |p^-1 q|";
inline constexpr const char* kFrame = "X_i = d/dx_i + 2 y_i d/dt, Y_i = d/dy_i - 2 x_i d/dt";

HPoint h_group(const HPoint& p, const HPoint& q);
HPoint h_inverse(const HPoint& p);
HPoint h_dilate(const HPoint& p, double r);

double koranyi_gauge(const HPoint& p);
double koranyi_distance(const HPoint& p, const HPoint& q);
/// Korányi distance on points stored as [z..., t].
MetricOracle koranyi_metric();

/// Piecewise-constant horizontal path on the unit time interval.
struct HorizontalPathH {
  std::vector<double> times;  // M + 1 nodes
  MatrixXd controls;          // 2n x M, coefficients of (X_1..X_n, Y_1..Y_n)
  HPoint start;
  std::vector<HPoint> positions;

  /// sum_j |a_j| dt
  double length() const;
};

/// Exact integration: each step multiplies by (a_j dt, 0) on the right.
HorizontalPathH integrate_h(const HPoint& start, const MatrixXd& controls);

struct CcOptions {
  int segments = 32;
  int restarts = 2;
  std::uint64_t seed = 1;
};

struct CcBounds {
  double upper = 0;
  double lower = 0;
  HorizontalPathH path;
};

/// Upper bound from the shortest horizontal path found; lower bound d_K / c_bilip.
CcBounds cc_distance_h(const HPoint& p, const HPoint& q, const CcOptions& options = {});

struct BilipschitzConstant {
  double value = 0;       // c with d_K / c <= d_cc <= c d_K on the sample
  double min_ratio = 0;   // min of d_cc upper / d_K
  double max_ratio = 0;
  std::size_t samples = 0;
};

/// Sampled once per n on the unit gauge sphere, then cached.
const BilipschitzConstant& bilipschitz_constant(int n);

struct ProfileRow {
  double scale = 0;
  double max_ratio = 0;
};

/// max d(f(x), f(y)) / |x - y| over axis pairs at lattice offsets 2^l, l < levels.
std::vector<ProfileRow> h_lipschitz_profile(const SampledMap& f, int levels);

/// Slope of log(max_ratio) against log(scale).
double profile_slope(const std::vector<ProfileRow>& profile);

struct LowRankReport {
  int max_rank = 0;
  std::size_t resolved = 0;
  std::size_t unresolved = 0;
  std::vector<std::size_t> rank_counts;  // index = rank, 0..k
};

/// Jets of f read in the identity chart R^{2n+1}.
LowRankReport low_rank_check(const SampledMap& f, const JetOptions& options = {});

}  // namespace gmt
