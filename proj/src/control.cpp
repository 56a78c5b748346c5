#include "gmt/control.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace gmt {

namespace {

class Solver {
 public:
  explicit Solver(const ControlProblem& p) : p_(p), dt_(1.0 / p.segments) {}

  struct Eval {
    VectorXd c;  // endpoint error
    VectorXd v;  // violations
  };

  Eval eval(const VectorXd& x) const {
    const auto positions = p_.integrate(as_controls(x));
    Eval e;
    e.c = positions.back() - p_.target;
    e.v = p_.violation ? p_.violation(positions) : VectorXd();
    return e;
  }

  MatrixXd as_controls(const VectorXd& x) const {
    return Eigen::Map<const MatrixXd>(x.data(), p_.control_dim, p_.segments);
  }

  // Central differences of [c; v] with respect to the flattened controls.
  MatrixXd jacobian(const VectorXd& x, Index rows) const {
    MatrixXd jac(rows, x.size());
    const Index nc = p_.target.size();
    if (p_.endpoint_jacobian && rows == nc) {
      jac = p_.endpoint_jacobian(as_controls(x));
      return jac;
    }
    const double step = 1e-6 * std::max(1.0, x.cwiseAbs().maxCoeff());
    VectorXd probe = x;
    for (Index i = 0; i < x.size(); ++i) {
      probe[i] = x[i] + step;
      const Eval up = eval(probe);
      probe[i] = x[i] - step;
      const Eval down = eval(probe);
      probe[i] = x[i];
      jac.col(i).head(up.c.size()) = (up.c - down.c) / (2 * step);
      if (up.v.size() > 0) jac.col(i).tail(up.v.size()) = (up.v - down.v) / (2 * step);
    }
    return jac;
  }

  double merit(const VectorXd& x, const Eval& e, const VectorXd& lambda, double mu) const {
    return 0.5 * dt_ * x.squaredNorm() + 0.5 * mu * (e.c + lambda / mu).squaredNorm() +
           0.5 * mu * e.v.squaredNorm();
  }

  // Augmented Lagrangian outer loop, Levenberg-Marquardt inside.
  VectorXd solve(VectorXd x, const ControlOptions& options) const {
    const Index nc = p_.target.size();
    VectorXd lambda = VectorXd::Zero(nc);
    double mu = 10.0 / (p_.scale * p_.scale);
    Eval e = eval(x);
    double last_c = e.c.norm();
    const double goal = 0.1 * options.tolerance * p_.scale;
    for (int outer = 0; outer < options.outer_iterations && !(e.c.norm() < goal && e.v.norm() < goal);
         ++outer) {
      double nu = 1e-3;
      for (int inner = 0; inner < options.inner_iterations; ++inner) {
        const Index nv = e.v.size();
        const MatrixXd jcv = jacobian(x, nc + nv);
        const double sdt = std::sqrt(dt_), smu = std::sqrt(mu);
        MatrixXd jac(x.size() + nc + nv, x.size());
        VectorXd res(x.size() + nc + nv);
        jac.topRows(x.size()) = sdt * MatrixXd::Identity(x.size(), x.size());
        jac.bottomRows(nc + nv) = smu * jcv;
        res.head(x.size()) = sdt * x;
        res.segment(x.size(), nc) = smu * (e.c + lambda / mu);
        if (nv > 0) res.tail(nv) = smu * e.v;
        const MatrixXd normal = jac.transpose() * jac;
        const VectorXd grad = jac.transpose() * res;
        const double before = merit(x, e, lambda, mu);
        bool accepted = false;
        for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
          MatrixXd damped = normal;
          damped.diagonal().array() += nu * (1.0 + normal.diagonal().array());
          const VectorXd delta = damped.ldlt().solve(-grad);
          const VectorXd trial = x + delta;
          const Eval te = eval(trial);
          if (te.c.allFinite() && merit(trial, te, lambda, mu) < before) {
            x = trial;
            e = te;
            nu = std::max(nu / 3, 1e-12);
            accepted = true;
            if (delta.norm() < 1e-9 * std::max(1.0, x.norm())) inner = options.inner_iterations;
          } else {
            nu *= 4;
          }
        }
        if (!accepted) break;
        if (before - merit(x, e, lambda, mu) < 1e-10 * before) break;
      }
      lambda += mu * e.c;
      if (e.c.norm() > 0.1 * last_c) mu *= 10;
      last_c = e.c.norm();
    }
    return project(x);
  }

  // Minimum-norm Newton steps onto the endpoint constraint.
  VectorXd project(VectorXd x) const {
    const Index nc = p_.target.size();
    for (int it = 0; it < 8; ++it) {
      const Eval e = eval(x);
      if (e.c.norm() < 1e-14 * p_.scale) break;
      const MatrixXd jc = jacobian(x, nc + e.v.size()).topRows(nc);
      const MatrixXd gram = jc * jc.transpose();
      Eigen::LDLT<MatrixXd> ldlt(gram);
      if (ldlt.info() != Eigen::Success) break;
      const VectorXd step = jc.transpose() * ldlt.solve(e.c);
      if (!step.allFinite()) break;
      const VectorXd trial = x - step;
      if (!(eval(trial).c.norm() < e.c.norm())) break;
      x = trial;
    }
    return x;
  }

 private:
  const ControlProblem& p_;
  double dt_;
};

}  // namespace

double control_length(const MatrixXd& controls) {
  if (controls.cols() == 0) return 0;
  return controls.colwise().norm().sum() / static_cast<double>(controls.cols());
}

ControlResult optimize_controls(const ControlProblem& problem, const ControlOptions& options) {
  require(problem.control_dim >= 1 && problem.segments >= 1, "optimize_controls: empty problem");
  require(static_cast<bool>(problem.integrate), "optimize_controls: missing integrator");
  require(problem.start.size() == problem.target.size(), "optimize_controls: start/target mismatch");
  require(problem.scale > 0, "optimize_controls: scale must be positive");

  const Solver solver(problem);
  const double tolerance = options.tolerance * problem.scale;
  std::vector<MatrixXd> starts = options.initial_guesses;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  const double amplitude = std::max((problem.target - problem.start).norm(), 1e-3 * problem.scale);
  for (int r = 0; r < options.restarts; ++r) {
    MatrixXd guess(problem.control_dim, problem.segments);
    for (Index i = 0; i < guess.size(); ++i) guess.data()[i] = amplitude * normal(rng);
    starts.push_back(guess);
  }
  require(!starts.empty(), "optimize_controls: no starting guess");

  ControlResult best;
  best.length = std::numeric_limits<double>::infinity();
  best.residual = std::numeric_limits<double>::infinity();
  double best_miss = std::numeric_limits<double>::infinity();
  for (const auto& guess : starts) {
    require(guess.rows() == problem.control_dim && guess.cols() == problem.segments,
            "optimize_controls: initial guess has wrong shape");
    const VectorXd flat = Eigen::Map<const VectorXd>(guess.data(), guess.size());
    const VectorXd x = solver.solve(flat, options);
    const MatrixXd controls = solver.as_controls(x);
    const auto positions = problem.integrate(controls);
    const double residual = (positions.back() - problem.target).norm();
    const VectorXd violation = problem.violation ? problem.violation(positions) : VectorXd();
    const bool ok = residual <= tolerance && (violation.size() == 0 || violation.norm() <= tolerance);
    const double length = control_length(controls);
    best.restart_lengths.push_back(ok ? length : std::numeric_limits<double>::infinity());
    if (ok && length < best.length) {
      best.controls = controls;
      best.positions = positions;
      best.length = length;
      best.residual = residual;
      best.converged = true;
    }
    if (residual < best_miss) best_miss = residual;
    best.best_so_far.push_back(best.length);
  }
  if (!best.converged) {
    throw Error(ErrorKind::no_path_found,
                "endpoint residual " + std::to_string(best_miss) + " above " + std::to_string(tolerance));
  }
  return best;
}

}  // namespace gmt
