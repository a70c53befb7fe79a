// Optimal-control problem over double-integrator dual-arm dynamics: state
// x = (q1, q2, dq1, dq2), control u = (ddq1, ddq2), semi-implicit Euler
// integration (exact dynamics defect on returned rollouts).

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "coopga/opt/ik_problem.hpp"
#include "coopga/errors.hpp"

namespace coopga::opt {

struct OcProblem {
  const kin::DualArmSystem* system = nullptr;
  int horizon = 10;
  double dt = 0.01;
  Eigen::VectorXd control_weight;  // diagonal of R, one entry per joint
  std::vector<WeightedResidual> running;   // E_k, evaluated at x_0..x_{N-1}
  std::vector<WeightedResidual> terminal;  // E_N
  double velocity_weight = 0.0;            // optional damping term w_v |dq|^2

  int njoints() const { return system->dof(); }
  int state_dim() const { return 2 * njoints(); }

  void validate() const {
    if (system == nullptr) throw ConfigError("OcProblem: missing system");
    if (horizon < 1) throw ConfigError("OcProblem: horizon must be >= 1");
    if (dt <= 0.0) throw ConfigError("OcProblem: dt must be positive");
    if (control_weight.size() != njoints()) {
      throw DimensionError("OcProblem: control_weight size mismatch");
    }
    if ((control_weight.array() <= 0.0).any()) {
      throw ConfigError("OcProblem: control weights must be positive");
    }
  }

  // Semi-implicit double integrator: dq' = dq + dt*u, q' = q + dt*dq'.
  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    const int n = njoints();
    Eigen::VectorXd out(2 * n);
    out.tail(n) = x.tail(n) + dt * u;
    out.head(n) = x.head(n) + dt * out.tail(n);
    return out;
  }

  // Constant dynamics linearization x' = A x + B u.
  Eigen::MatrixXd dynamics_state_matrix() const {
    const int n = njoints();
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    a.topRightCorner(n, n) = dt * Eigen::MatrixXd::Identity(n, n);
    return a;
  }
  Eigen::MatrixXd dynamics_control_matrix() const {
    const int n = njoints();
    Eigen::MatrixXd b(2 * n, n);
    b.topRows(n) = dt * dt * Eigen::MatrixXd::Identity(n, n);
    b.bottomRows(n) = dt * Eigen::MatrixXd::Identity(n, n);
    return b;
  }
};

struct Trajectory {
  Eigen::MatrixXd states;               // state_dim x (N+1)
  Eigen::MatrixXd controls;             // njoints x N
  Eigen::VectorXd step_residual_norms;  // stacked unweighted residual norm per step
};

namespace detail {

inline double residual_cost(const std::vector<WeightedResidual>& parts,
                            const cdts::CdtsState& state, double* unweighted_sq = nullptr) {
  double cost = 0.0;
  for (const auto& p : parts) {
    const double sq = p.build(state).value_vector().squaredNorm();
    cost += p.weight * sq;
    if (unweighted_sq != nullptr) *unweighted_sq += sq;
  }
  return cost;
}

}  // namespace detail

inline Trajectory rollout(const OcProblem& ocp, const Eigen::VectorXd& x0,
                          const Eigen::MatrixXd& controls) {
  ocp.validate();
  const int n = ocp.njoints();
  if (x0.size() != 2 * n) throw DimensionError("rollout: x0 has wrong dimension");
  if (controls.rows() != n || controls.cols() != ocp.horizon) {
    throw DimensionError("rollout: control sequence must be njoints x horizon");
  }
  Trajectory traj;
  traj.states.resize(2 * n, ocp.horizon + 1);
  traj.controls = controls;
  traj.step_residual_norms.resize(ocp.horizon + 1);

  cdts::CdtsState state = cdts::CdtsState::from_stacked(*ocp.system, x0.head(n));
  traj.states.col(0) = x0;
  for (int k = 0; k <= ocp.horizon; ++k) {
    if (k > 0) traj.states.col(k) = ocp.step(traj.states.col(k - 1), controls.col(k - 1));
    state.update_stacked(traj.states.col(k).head(n));
    double sq = 0.0;
    detail::residual_cost(k == ocp.horizon ? ocp.terminal : ocp.running, state, &sq);
    traj.step_residual_norms(k) = std::sqrt(sq);
  }
  return traj;
}

// Total cost of a rolled-out trajectory under the OCP objective.
inline double trajectory_cost(const OcProblem& ocp, const Trajectory& traj) {
  const int n = ocp.njoints();
  cdts::CdtsState state = cdts::CdtsState::from_stacked(*ocp.system, traj.states.col(0).head(n));
  double cost = 0.0;
  for (int k = 0; k < ocp.horizon; ++k) {
    state.update_stacked(traj.states.col(k).head(n));
    cost += detail::residual_cost(ocp.running, state);
    cost += traj.controls.col(k).dot(ocp.control_weight.asDiagonal() * traj.controls.col(k));
    cost += ocp.velocity_weight * traj.states.col(k).tail(n).squaredNorm();
  }
  state.update_stacked(traj.states.col(ocp.horizon).head(n));
  cost += detail::residual_cost(ocp.terminal, state);
  cost += ocp.velocity_weight * traj.states.col(ocp.horizon).tail(n).squaredNorm();
  if (!std::isfinite(cost)) throw Error("trajectory_cost: non-finite cost");
  return cost;
}

}  // namespace coopga::opt
