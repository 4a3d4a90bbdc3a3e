#pragma once

// Damped Gauss-Newton (Levenberg-Marquardt with Marquardt diagonal scaling
// and multiplicative damping updates) for small dense problems.

#include <Eigen/Dense>
#include <cmath>
#include <concepts>

namespace radcool {

/// A residual model: `evaluate` fills residuals r(p) and, when J is non-null,
/// the Jacobian dr/dp. An optional `project` clamps p onto its feasible box.
template <class M>
concept ResidualModel = requires(const M& m, const Eigen::VectorXd& p, Eigen::VectorXd& r,
                                 Eigen::MatrixXd* J) {
  { m.residual_count() } -> std::convertible_to<Eigen::Index>;
  m.evaluate(p, r, J);
};

struct LeastSquaresOptions {
  double gradient_tolerance = 1e-10;
  double step_tolerance = 1e-14;
  int max_iterations = 200;
  double initial_damping = 1e-3;
};

struct LeastSquaresSolution {
  Eigen::VectorXd params;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd jacobian;
  double residual_norm = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

template <ResidualModel M>
LeastSquaresSolution minimize(const M& model, Eigen::VectorXd p,
                              const LeastSquaresOptions& opts = {}) {
  auto project = [&](Eigen::VectorXd& x) {
    if constexpr (requires { model.project(x); }) model.project(x);
  };
  const Eigen::Index m = model.residual_count();
  const Eigen::Index n = p.size();

  project(p);
  Eigen::VectorXd r(m);
  Eigen::MatrixXd J(m, n);
  model.evaluate(p, r, &J);
  double cost = r.squaredNorm();
  double lambda = opts.initial_damping;

  LeastSquaresSolution sol;
  Eigen::VectorXd trial_r(m);
  for (;;) {
    const Eigen::VectorXd g = J.transpose() * r;
    sol.gradient_norm = g.lpNorm<Eigen::Infinity>();
    if (sol.gradient_norm < opts.gradient_tolerance) {
      sol.converged = true;
      break;
    }
    if (sol.iterations >= opts.max_iterations) break;

    const Eigen::MatrixXd jtj = J.transpose() * J;
    Eigen::VectorXd trial;
    bool accepted = false;
    while (lambda < 1e16) {
      Eigen::MatrixXd a = jtj;
      for (Eigen::Index k = 0; k < n; ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-300);
      const Eigen::VectorXd delta = a.ldlt().solve(-g);
      trial = p + delta;
      project(trial);
      model.evaluate(trial, trial_r, nullptr);
      const double trial_cost = trial_r.squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost <= cost) {
        accepted = true;
        lambda = std::max(lambda / 10.0, 1e-15);
        cost = trial_cost;
        break;
      }
      lambda *= 10.0;
    }
    ++sol.iterations;
    if (!accepted) {
      // No damped step lowers the cost: stationary to working precision.
      sol.converged = true;
      break;
    }
    const double step = (trial - p).norm();
    p = trial;
    model.evaluate(p, r, &J);
    if (step <= opts.step_tolerance * (p.norm() + opts.step_tolerance)) {
      sol.converged = true;
      break;
    }
  }
  sol.params = p;
  sol.residuals = r;
  sol.jacobian = J;
  sol.residual_norm = r.norm();
  sol.gradient_norm = (J.transpose() * r).lpNorm<Eigen::Infinity>();
  return sol;
}

}  // namespace radcool
