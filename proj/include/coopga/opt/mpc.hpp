// Receding-horizon loop around the iLQR solver: the plant integrates the
// same double-integrator dynamics at a finer tick, controls are held
// zero-order between replans, and scheduled perturbations are injected into
// the plant state between ticks.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "coopga/opt/ilqr.hpp"

namespace coopga::opt {

struct Perturbation {
  int tick = 0;           // plant tick after which dx is added
  Eigen::VectorXd dx;     // full state offset (q, dq)
};

struct MpcRecord {
  int tick = 0;
  double time_s = 0.0;
  double cost = 0.0;                  // planned cost at the latest replan
  Eigen::VectorXd residual_norms;     // per running-residual norm at this tick
  Eigen::VectorXd q, dq, u;
  bool replanned = false;
  bool ilqr_ok = true;
};

struct MpcLog {
  std::vector<MpcRecord> records;
  int replans = 0;
  int failures = 0;  // ticks where the solve failed and control was held
};

inline MpcLog mpc_loop(const OcProblem& ocp, const Eigen::VectorXd& x0,
                       const std::vector<Perturbation>& schedule, const MpcOptions& opts) {
  ocp.validate();
  const int n = ocp.njoints();
  if (x0.size() != 2 * n) throw DimensionError("mpc_loop: x0 has wrong dimension");
  if (opts.replan_every < 1) throw ConfigError("mpc_loop: replan_every must be >= 1");
  for (const auto& p : schedule) {
    if (p.dx.size() != 2 * n) throw DimensionError("mpc_loop: perturbation dimension mismatch");
  }

  MpcLog log;
  Eigen::VectorXd x = x0;
  Eigen::MatrixXd controls = Eigen::MatrixXd::Zero(n, ocp.horizon);
  double planned_cost = 0.0;
  int plan_tick = 0;
  bool have_plan = false;

  cdts::CdtsState state = cdts::CdtsState::from_stacked(*ocp.system, x.head(n));

  for (int tick = 0; tick < opts.steps; ++tick) {
    bool replanned = false;
    bool ok = true;
    if (tick % opts.replan_every == 0) {
      // Warm start: shift by the number of OCP steps since the last plan,
      // pad with zeros.
      const int shift = have_plan
                            ? static_cast<int>(std::lround((tick - plan_tick) * opts.plant_dt /
                                                           ocp.dt))
                            : 0;
      Eigen::MatrixXd warm = Eigen::MatrixXd::Zero(n, ocp.horizon);
      if (have_plan && shift < ocp.horizon) {
        warm.leftCols(ocp.horizon - shift) = controls.rightCols(ocp.horizon - shift);
      }
      try {
        IlqrResult sol = ilqr(ocp, x, warm, opts.ilqr);
        controls = sol.trajectory.controls;
        planned_cost = sol.report.cost;
        plan_tick = tick;
        have_plan = true;
        ++log.replans;
      } catch (const Error&) {
        ok = false;
        ++log.failures;  // hold the previous plan
      }
      replanned = ok;
    }

    const int plan_step = have_plan
                              ? std::min<int>(static_cast<int>(std::floor(
                                                  (tick - plan_tick) * opts.plant_dt / ocp.dt)),
                                              ocp.horizon - 1)
                              : 0;
    const Eigen::VectorXd u = have_plan ? controls.col(plan_step).eval()
                                        : Eigen::VectorXd::Zero(n).eval();

    // Log the state the control acts on.
    state.update_stacked(x.head(n));
    MpcRecord rec;
    rec.tick = tick;
    rec.time_s = tick * opts.plant_dt;
    rec.cost = planned_cost;
    rec.residual_norms.resize(static_cast<int>(ocp.running.size()));
    for (std::size_t i = 0; i < ocp.running.size(); ++i) {
      rec.residual_norms(static_cast<int>(i)) = ocp.running[i].build(state).norm();
    }
    rec.q = x.head(n);
    rec.dq = x.tail(n);
    rec.u = u;
    rec.replanned = replanned;
    rec.ilqr_ok = ok;
    log.records.push_back(std::move(rec));

    // Plant step at the fine tick, semi-implicit like the model.
    Eigen::VectorXd v = x.tail(n) + opts.plant_dt * u;
    x.head(n) += opts.plant_dt * v;
    x.tail(n) = v;

    for (const auto& p : schedule) {
      if (p.tick == tick) x += p.dx;
    }
  }
  return log;
}

}  // namespace coopga::opt
