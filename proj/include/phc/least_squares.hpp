#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace phc {

struct LmOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-10;  ///< converged when every |step_i| <= tol * (|p_i| + tol)
  double initial_damping = 1e-3;
};

struct LmOutcome {
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;  ///< scaled by the reduced chi-square; +inf on unidentifiable parameters
  double initial_cost = 0.0;   ///< 0.5 * |r|^2 at the starting point
  double final_cost = 0.0;
  int iterations = 0;
  bool converged = false;
  int dof = 0;
};

/// Damped Gauss-Newton (Levenberg-Marquardt with Marquardt diagonal scaling).
///
/// `residual(p, r, J)` fills the weighted residual vector r (size n) and its
/// Jacobian J (n x p) and returns false when p is outside the model's domain;
/// such trial steps are rejected and the damping is increased.
template <typename Residual>
LmOutcome levenberg_marquardt(Residual&& residual, Eigen::VectorXd p, Eigen::Index n_residuals,
                              const LmOptions& options = {}) {
  const Eigen::Index np = p.size();
  Eigen::VectorXd r(n_residuals);
  Eigen::MatrixXd jac(n_residuals, np);
  LmOutcome out;
  out.dof = static_cast<int>(n_residuals - np);

  if (!residual(p, r, jac)) {
    out.params = p;
    out.covariance = Eigen::MatrixXd::Constant(np, np, std::numeric_limits<double>::infinity());
    return out;
  }
  double cost = 0.5 * r.squaredNorm();
  out.initial_cost = cost;

  Eigen::VectorXd r_trial(n_residuals);
  Eigen::MatrixXd jac_trial(n_residuals, np);
  double lambda = options.initial_damping;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const Eigen::MatrixXd a = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() == 0.0) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    bool small_step = false;
    // Floor keeps the damped system solvable when a parameter has no curvature.
    const double floor = std::max(a.diagonal().maxCoeff() * 1e-12, 1e-300);
    while (lambda < 1e20) {
      Eigen::MatrixXd damped = a;
      for (Eigen::Index k = 0; k < np; ++k) {
        damped(k, k) += lambda * std::max(a(k, k), floor);
      }
      const Eigen::VectorXd step = damped.ldlt().solve(-g);
      small_step = true;
      for (Eigen::Index k = 0; k < np; ++k) {
        if (!(std::abs(step(k)) <= options.step_tolerance * (std::abs(p(k)) + options.step_tolerance))) {
          small_step = false;
        }
      }
      const Eigen::VectorXd trial = p + step;
      if (step.allFinite() && residual(trial, r_trial, jac_trial)) {
        const double trial_cost = 0.5 * r_trial.squaredNorm();
        if (trial_cost <= cost) {
          p = trial;
          r.swap(r_trial);
          jac.swap(jac_trial);
          cost = trial_cost;
          lambda = std::max(lambda / 10.0, 1e-15);
          accepted = true;
          break;
        }
      }
      if (small_step) break;
      lambda *= 10.0;
    }
    if (small_step) {
      out.converged = true;
      ++it;
      break;
    }
    if (!accepted) break;
  }

  out.params = p;
  out.final_cost = cost;
  out.iterations = it;

  // Covariance from the pseudo-inverse of J^T J; directions with no curvature
  // make every parameter they touch unidentifiable.
  const Eigen::MatrixXd a = jac.transpose() * jac;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  const Eigen::VectorXd d = eig.eigenvalues();
  const Eigen::MatrixXd v = eig.eigenvectors();
  const double d_max = std::max(d.cwiseAbs().maxCoeff(), 1e-300);
  const double scale = out.dof > 0 ? 2.0 * cost / out.dof : 0.0;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(np, np);
  Eigen::VectorXi bad = Eigen::VectorXi::Zero(np);
  for (Eigen::Index k = 0; k < np; ++k) {
    if (d(k) > 1e-13 * d_max) {
      cov += v.col(k) * v.col(k).transpose() / d(k);
    } else {
      for (Eigen::Index q = 0; q < np; ++q) {
        if (std::abs(v(q, k)) > 1e-3) bad(q) = 1;
      }
    }
  }
  cov *= scale;
  for (Eigen::Index q = 0; q < np; ++q) {
    if (bad(q)) {
      cov.row(q).setConstant(std::numeric_limits<double>::infinity());
      cov.col(q).setConstant(std::numeric_limits<double>::infinity());
    }
  }
  out.covariance = cov;
  return out;
}

}  // namespace phc
