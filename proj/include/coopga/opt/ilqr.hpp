// Iterative LQR with a regularized backward pass and backtracking line
// search. Residual costs are quadraticized from the analytic multivector
// Jacobians (Gauss-Newton approximation); the double-integrator dynamics
// are exactly linear, so LQ problems solve in one sweep.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "coopga/opt/ocp.hpp"
#include "coopga/opt/options.hpp"

namespace coopga::opt {

struct IlqrReport {
  bool converged = false;
  int iterations = 0;
  double cost = 0.0;
  double gradient_norm = 0.0;  // max over steps of |Q_u|_inf
  double regularization = 0.0;
  std::string reason;
};

struct IlqrResult {
  Trajectory trajectory;
  std::vector<Eigen::MatrixXd> feedback_gains;  // K_k
  std::vector<Eigen::VectorXd> feedforward;     // k_k
  IlqrReport report;
};

namespace detail {

struct StageDerivs {
  Eigen::VectorXd lx;
  Eigen::MatrixXd lxx;
};

// Gauss-Newton quadraticization of the state-dependent cost at x.
inline StageDerivs cost_derivatives(const OcProblem& ocp,
                                    const std::vector<WeightedResidual>& parts,
                                    cdts::CdtsState& state, const Eigen::VectorXd& x) {
  const int n = ocp.njoints();
  state.update_stacked(x.head(n));
  StageDerivs d;
  d.lx = Eigen::VectorXd::Zero(2 * n);
  d.lxx = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (const auto& p : parts) {
    const cdts::Residual r = p.build(state);
    const Eigen::MatrixXd jac = r.jacobian_matrix();
    const Eigen::VectorXd val = r.value_vector();
    d.lx.head(n) += 2.0 * p.weight * jac.transpose() * val;
    d.lxx.topLeftCorner(n, n) += 2.0 * p.weight * jac.transpose() * jac;
  }
  if (ocp.velocity_weight > 0.0) {
    d.lx.tail(n) += 2.0 * ocp.velocity_weight * x.tail(n);
    d.lxx.bottomRightCorner(n, n) +=
        2.0 * ocp.velocity_weight * Eigen::MatrixXd::Identity(n, n);
  }
  return d;
}

}  // namespace detail

inline IlqrResult ilqr(const OcProblem& ocp, const Eigen::VectorXd& x0,
                       const Eigen::MatrixXd& u_init, const IlqrOptions& opts = {}) {
  ocp.validate();
  const int n = ocp.njoints();
  const int N = ocp.horizon;
  if (u_init.rows() != n || u_init.cols() != N) {
    throw DimensionError("ilqr: u_init must be njoints x horizon");
  }

  const Eigen::MatrixXd A = ocp.dynamics_state_matrix();
  const Eigen::MatrixXd B = ocp.dynamics_control_matrix();
  const Eigen::MatrixXd R2 = 2.0 * ocp.control_weight.asDiagonal();

  IlqrResult result;
  result.trajectory = rollout(ocp, x0, u_init);
  double cost = trajectory_cost(ocp, result.trajectory);

  cdts::CdtsState state = cdts::CdtsState::from_stacked(*ocp.system, x0.head(n));
  double reg = opts.reg_init;
  std::vector<Eigen::MatrixXd> K(N);
  std::vector<Eigen::VectorXd> kff(N);

  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    // Backward pass; restarts with more regularization on indefiniteness.
    double grad_norm = 0.0;
    bool backward_ok = false;
    while (!backward_ok) {
      backward_ok = true;
      grad_norm = 0.0;
      const detail::StageDerivs term = detail::cost_derivatives(
          ocp, ocp.terminal, state, result.trajectory.states.col(N));
      Eigen::VectorXd vx = term.lx;
      Eigen::MatrixXd vxx = term.lxx;
      for (int k = N - 1; k >= 0; --k) {
        const detail::StageDerivs stage = detail::cost_derivatives(
            ocp, ocp.running, state, result.trajectory.states.col(k));
        const Eigen::VectorXd u = result.trajectory.controls.col(k);
        const Eigen::VectorXd qx = stage.lx + A.transpose() * vx;
        const Eigen::VectorXd qu = R2 * u + B.transpose() * vx;
        const Eigen::MatrixXd qxx = stage.lxx + A.transpose() * vxx * A;
        Eigen::MatrixXd quu = R2 + B.transpose() * vxx * B;
        const Eigen::MatrixXd qux = B.transpose() * vxx * A;
        quu.diagonal().array() += reg;

        const Eigen::LLT<Eigen::MatrixXd> llt(quu);
        if (llt.info() != Eigen::Success) {
          reg = std::max(reg * opts.reg_factor, opts.reg_min);
          if (reg > opts.reg_max) {
            result.report.reason = "backward pass indefinite at regularization cap";
            result.report.cost = cost;
            result.report.iterations = iter;
            result.report.regularization = reg;
            result.feedback_gains = K;
            result.feedforward = kff;
            return result;
          }
          backward_ok = false;
          break;
        }
        kff[k] = -llt.solve(qu);
        K[k] = -llt.solve(qux);
        vx = qx + K[k].transpose() * quu * kff[k] + K[k].transpose() * qu +
             qux.transpose() * kff[k];
        vxx = qxx + K[k].transpose() * quu * K[k] + K[k].transpose() * qux +
              qux.transpose() * K[k];
        vxx = 0.5 * (vxx + vxx.transpose());
        grad_norm = std::max(grad_norm, qu.lpNorm<Eigen::Infinity>());
      }
    }

    result.report.gradient_norm = grad_norm;
    if (grad_norm < opts.grad_tol) {
      result.report.converged = true;
      result.report.reason = "gradient below tolerance";
      break;
    }

    // Forward pass with backtracking; trial states that throw (e.g. a log
    // branch crossing) reject the step like a cost increase.
    bool accepted = false;
    for (double alpha = 1.0; alpha >= opts.alpha_min; alpha *= 0.5) {
      Trajectory trial;
      trial.states.resize(2 * n, N + 1);
      trial.controls.resize(n, N);
      trial.states.col(0) = x0;
      for (int k = 0; k < N; ++k) {
        trial.controls.col(k) =
            result.trajectory.controls.col(k) + alpha * kff[k] +
            K[k] * (trial.states.col(k) - result.trajectory.states.col(k));
        trial.states.col(k + 1) = ocp.step(trial.states.col(k), trial.controls.col(k));
      }
      double trial_cost = std::numeric_limits<double>::infinity();
      try {
        trial_cost = trajectory_cost(ocp, trial);
      } catch (const Error&) {
      }
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        const double improvement = cost - trial_cost;
        trial.step_residual_norms = rollout(ocp, x0, trial.controls).step_residual_norms;
        result.trajectory = std::move(trial);
        cost = trial_cost;
        accepted = true;
        reg = (reg > opts.reg_min) ? reg / opts.reg_factor : 0.0;
        if (improvement < opts.cost_tol) {
          result.report.converged = true;
          result.report.reason = "cost decrease below tolerance";
          iter++;
        }
        break;
      }
    }
    if (!accepted) {
      reg = std::max(reg * opts.reg_factor, opts.reg_min);
      if (reg > opts.reg_max) {
        result.report.reason = "line search failed at regularization cap";
        break;
      }
      continue;
    }
    if (result.report.converged) break;
  }

  if (!result.report.converged && result.report.reason.empty()) {
    result.report.reason = "iteration budget exhausted";
  }
  result.report.iterations = iter;
  result.report.cost = cost;
  result.report.regularization = reg;
  result.feedback_gains = K;
  result.feedforward = kff;
  return result;
}

}  // namespace coopga::opt
