#pragma once

#include "gmt/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace gmt {

/// Piecewise-constant control problem: steer `start` to `target` in unit time with
/// `segments` equal steps, minimizing the energy 1/2 * dt * sum |a_j|^2.
struct ControlProblem {
  int control_dim = 0;
  int segments = 0;
  VectorXd start;
  VectorXd target;
  /// Positions after each step (segments + 1 entries, first = start) for controls m x segments.
  std::function<std::vector<VectorXd>(const MatrixXd&)> integrate;
  /// Optional analytic d(endpoint)/d(controls), columns in column-major control order.
  std::function<MatrixXd(const MatrixXd&)> endpoint_jacobian;
  /// Optional nonnegative constraint violations of a trajectory (driven to zero by penalty).
  std::function<VectorXd(const std::vector<VectorXd>&)> violation;
  /// Length scale for the endpoint tolerance.
  double scale = 1.0;
};

struct ControlOptions {
  int restarts = 4;
  std::uint64_t seed = 1;
  double tolerance = 1e-6;  // endpoint error allowed, relative to scale
  int outer_iterations = 25;
  int inner_iterations = 80;
  std::vector<MatrixXd> initial_guesses;  // tried before the random restarts
};

struct ControlResult {
  MatrixXd controls;
  std::vector<VectorXd> positions;
  double length = 0;    // sum_j |a_j| dt
  double residual = 0;  // |endpoint - target|
  bool converged = false;
  std::vector<double> restart_lengths;  // per attempt; +inf when it missed the target
  std::vector<double> best_so_far;      // running minimum of restart_lengths
};

/// Augmented-Lagrangian / Levenberg-Marquardt search over controls, best of several starts.
/// Throws no_path_found when no attempt reaches the target within tolerance.
ControlResult optimize_controls(const ControlProblem& problem, const ControlOptions& options);

double control_length(const MatrixXd& controls);

}  // namespace gmt
