// Damped Gauss-Newton over the stacked joint vector. Constraints are
// handled by a quadratic penalty with a geometric schedule; each penalty
// stage runs Levenberg-damped least-squares steps whose accepted iterates
// never increase that stage's merit function.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "coopga/opt/ik_problem.hpp"
#include "coopga/opt/options.hpp"

namespace coopga::opt {

enum class GnStatus { kConverged, kMaxIterations, kSingularity, kDampingCap };

struct GnRecord {
  int iter = 0;
  double cost = 0.0;             // weighted objective sum of squares
  double constraint_norm = 0.0;  // stacked unweighted constraint norm
  Eigen::VectorXd q;
  cga::Vec3 ee1{}, ee2{};
};

struct GnReport {
  GnStatus status = GnStatus::kMaxIterations;
  int iterations = 0;
  double objective_cost = 0.0;
  double constraint_norm = 0.0;
  double gradient_norm = 0.0;
  std::string reason;
  std::vector<GnRecord> history;
};

struct GnResult {
  Eigen::VectorXd q;
  GnReport report;
};

namespace detail {

struct GnEval {
  Eigen::MatrixXd jac;   // weighted stacked Jacobian
  Eigen::VectorXd res;   // weighted stacked residual
  double objective_cost = 0.0;
  double constraint_sq = 0.0;
  double merit = 0.0;
};

// Stacks all objective and constraint residual rows at q; sqrt-weights make
// ||res||^2 the stage merit.
inline GnEval evaluate(const IkProblem& p, cdts::CdtsState& state, const Eigen::VectorXd& q,
                       double mu, bool with_jacobian) {
  state.update_stacked(q);
  int rows = 0;
  std::vector<cdts::Residual> parts;
  parts.reserve(p.objectives.size() + p.constraints.size());
  for (const auto& o : p.objectives) parts.push_back(o.build(state));
  for (const auto& c : p.constraints) parts.push_back(c(state));
  for (const auto& r : parts) rows += r.rows();

  GnEval e;
  e.res.resize(rows);
  if (with_jacobian) e.jac.resize(rows, q.size());
  int at = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const bool is_constraint = i >= p.objectives.size();
    const double w = is_constraint ? mu : p.objectives[i].weight;
    const Eigen::VectorXd v = parts[i].value_vector();
    const double sq = v.squaredNorm();
    if (is_constraint) {
      e.constraint_sq += sq;
    } else {
      e.objective_cost += w * sq;
    }
    const double sw = std::sqrt(w);
    e.res.segment(at, v.size()) = sw * v;
    if (with_jacobian) e.jac.middleRows(at, v.size()) = sw * parts[i].jacobian_matrix();
    at += static_cast<int>(v.size());
  }
  e.merit = e.objective_cost + mu * e.constraint_sq;
  return e;
}

inline Eigen::VectorXd clamp_if(const IkProblem& p, bool enforce, const Eigen::VectorXd& q) {
  if (!enforce) return q;
  auto [q1, q2] = p.system->split(q);
  Eigen::VectorXd out(q.size());
  out << p.system->arm1().clamp_to_limits(q1), p.system->arm2().clamp_to_limits(q2);
  return out;
}

}  // namespace detail

inline GnResult gauss_newton(const IkProblem& problem, const GaussNewtonOptions& opts = {}) {
  problem.validate();
  const bool constrained = !problem.constraints.empty();
  const int stages = constrained ? opts.penalty_loops : 1;

  Eigen::VectorXd q = detail::clamp_if(problem, opts.enforce_limits, problem.q0);
  cdts::CdtsState state = cdts::CdtsState::from_stacked(*problem.system, q);

  GnReport report;
  auto record = [&](int iter, const detail::GnEval& e) {
    GnRecord rec;
    rec.iter = iter;
    rec.cost = e.objective_cost;
    rec.constraint_norm = std::sqrt(e.constraint_sq);
    rec.q = q;
    rec.ee1 = state.ee_position(1);
    rec.ee2 = state.ee_position(2);
    report.history.push_back(std::move(rec));
  };

  int total_iters = 0;
  double gnorm = 0.0;
  detail::GnEval eval;
  for (int stage = 0; stage < stages; ++stage) {
    const double mu =
        constrained ? opts.penalty_init * std::pow(opts.penalty_factor, stage) : 0.0;
    double lambda = opts.lambda_init;
    eval = detail::evaluate(problem, state, q, mu, true);
    if (stage == 0) record(0, eval);

    while (total_iters < opts.max_iter) {
      if (problem.guard_enabled && !constrained) {
        const SeparationCheck guard = check_pointpair_separation(state, problem.guard_separation);
        if (guard.tripped) {
          report.status = GnStatus::kSingularity;
          report.reason = "cooperative pointpair singular: separation " +
                          std::to_string(guard.separation) + " m";
          report.iterations = total_iters;
          report.objective_cost = eval.objective_cost;
          report.constraint_norm = std::sqrt(eval.constraint_sq);
          return {q, report};
        }
      }

      const Eigen::VectorXd grad = eval.jac.transpose() * eval.res;
      gnorm = grad.lpNorm<Eigen::Infinity>();
      if (gnorm < opts.grad_tol) break;

      const Eigen::MatrixXd jtj = eval.jac.transpose() * eval.jac;
      bool accepted = false;
      double step_norm = 0.0;
      while (lambda <= opts.lambda_max) {
        Eigen::MatrixXd damped = jtj;
        damped.diagonal().array() += lambda;
        const Eigen::VectorXd dq = damped.ldlt().solve(-grad);
        const Eigen::VectorXd q_cand =
            detail::clamp_if(problem, opts.enforce_limits, q + dq);
        double merit_cand = std::numeric_limits<double>::infinity();
        try {
          merit_cand = detail::evaluate(problem, state, q_cand, mu, false).merit;
        } catch (const Error&) {
          // trial point left the valid domain (e.g. log branch); reject
        }
        if (std::isfinite(merit_cand) && merit_cand <= eval.merit) {
          step_norm = (q_cand - q).norm();
          q = q_cand;
          lambda = std::max(lambda / opts.lambda_down, 1e-12);
          accepted = true;
          break;
        }
        lambda *= opts.lambda_up;
      }
      ++total_iters;
      if (!accepted) {
        eval = detail::evaluate(problem, state, q, mu, true);
        report.status = GnStatus::kDampingCap;
        report.reason = "Levenberg damping exceeded cap without an acceptable step";
        report.iterations = total_iters;
        report.objective_cost = eval.objective_cost;
        report.constraint_norm = std::sqrt(eval.constraint_sq);
        report.gradient_norm = gnorm;
        return {q, report};
      }
      eval = detail::evaluate(problem, state, q, mu, true);
      record(total_iters, eval);
      if (step_norm < opts.step_tol) break;
    }

    if (constrained && std::sqrt(eval.constraint_sq) < opts.constraint_tol &&
        gnorm < opts.grad_tol) {
      break;  // no need to push the penalty further
    }
  }

  eval = detail::evaluate(problem, state, q, constrained ? 1.0 : 0.0, true);
  report.iterations = total_iters;
  report.objective_cost = eval.objective_cost;
  report.constraint_norm = std::sqrt(eval.constraint_sq);
  report.gradient_norm = gnorm;
  const bool constraints_met =
      !constrained || report.constraint_norm < opts.constraint_tol;
  if (constraints_met && total_iters < opts.max_iter) {
    report.status = GnStatus::kConverged;
    report.reason = "gradient below tolerance";
  } else if (constraints_met) {
    report.status = GnStatus::kMaxIterations;
    report.reason = "iteration budget exhausted (objective may be converged)";
  } else {
    report.status = GnStatus::kMaxIterations;
    report.reason = "constraints not met at tolerance";
  }
  return {q, report};
}

}  // namespace coopga::opt
