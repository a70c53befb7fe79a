// Flat key-value solver configuration shared by the Gauss-Newton and iLQR
// layers. All numeric defaults are artifact decisions; every key can be
// overridden from a scenario file.

#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>

#include "coopga/errors.hpp"

namespace coopga::opt {

struct GaussNewtonOptions {
  int max_iter = 200;
  double grad_tol = 1e-12;
  double step_tol = 1e-14;
  double constraint_tol = 1e-6;
  double lambda_init = 1e-3;
  double lambda_up = 2.0;    // rejection factor
  double lambda_down = 3.0;  // acceptance divisor
  double lambda_max = 1e10;
  double penalty_init = 1e2;
  double penalty_factor = 10.0;
  int penalty_loops = 5;
  bool enforce_limits = false;
};

struct IlqrOptions {
  int max_iter = 100;
  double grad_tol = 1e-9;
  double cost_tol = 1e-14;
  double reg_init = 0.0;
  double reg_factor = 10.0;
  double reg_min = 1e-8;
  double reg_max = 1e10;
  double alpha_min = 1e-4;
};

struct MpcOptions {
  double plant_dt = 1e-3;
  int replan_every = 10;  // plant ticks between replans
  int steps = 500;        // total plant ticks
  IlqrOptions ilqr;
};

struct SolverOptions {
  GaussNewtonOptions gn;
  IlqrOptions ilqr;
  MpcOptions mpc;
  int horizon = 10;
  double dt = 0.01;
  double control_weight = 1e-2;    // diagonal of R
  double velocity_weight = 0.0;    // optional joint-velocity damping in E_k
  double guard_separation = 0.01;  // pointpair singularity threshold, meters
  std::uint64_t seed = 0;
};

// Applies a flat {key: number} object onto the defaults. Unknown keys are
// rejected so typos cannot silently fall back to defaults.
inline SolverOptions parse_solver_options(const nlohmann::json& j,
                                          SolverOptions base = SolverOptions{}) {
  if (j.is_null()) return base;
  if (!j.is_object()) throw ConfigError("solver options: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number() && !value.is_boolean()) {
      throw ConfigError("solver options: '" + key + "' must be numeric");
    }
    const double v = value.is_boolean() ? (value.get<bool>() ? 1.0 : 0.0) : value.get<double>();
    if (key == "max_iter") base.gn.max_iter = static_cast<int>(v);
    else if (key == "grad_tol") base.gn.grad_tol = v;
    else if (key == "step_tol") base.gn.step_tol = v;
    else if (key == "constraint_tol") base.gn.constraint_tol = v;
    else if (key == "lambda_init") base.gn.lambda_init = v;
    else if (key == "lambda_up") base.gn.lambda_up = v;
    else if (key == "lambda_down") base.gn.lambda_down = v;
    else if (key == "lambda_max") base.gn.lambda_max = v;
    else if (key == "penalty_init") base.gn.penalty_init = v;
    else if (key == "penalty_factor") base.gn.penalty_factor = v;
    else if (key == "penalty_loops") base.gn.penalty_loops = static_cast<int>(v);
    else if (key == "enforce_limits") base.gn.enforce_limits = v != 0.0;
    else if (key == "ilqr_max_iter") base.ilqr.max_iter = static_cast<int>(v);
    else if (key == "ilqr_grad_tol") base.ilqr.grad_tol = v;
    else if (key == "ilqr_cost_tol") base.ilqr.cost_tol = v;
    else if (key == "ilqr_reg_init") base.ilqr.reg_init = v;
    else if (key == "ilqr_reg_factor") base.ilqr.reg_factor = v;
    else if (key == "ilqr_reg_max") base.ilqr.reg_max = v;
    else if (key == "ilqr_alpha_min") base.ilqr.alpha_min = v;
    else if (key == "plant_dt") base.mpc.plant_dt = v;
    else if (key == "replan_every") base.mpc.replan_every = static_cast<int>(v);
    else if (key == "steps") base.mpc.steps = static_cast<int>(v);
    else if (key == "horizon") base.horizon = static_cast<int>(v);
    else if (key == "dt") base.dt = v;
    else if (key == "control_weight") base.control_weight = v;
    else if (key == "velocity_weight") base.velocity_weight = v;
    else if (key == "guard_separation") base.guard_separation = v;
    else if (key == "seed") base.seed = static_cast<std::uint64_t>(v);
    else throw ConfigError("solver options: unknown key '" + key + "'");
  }
  base.mpc.ilqr = base.ilqr;
  if (base.horizon < 1) throw ConfigError("solver options: horizon must be >= 1");
  if (base.dt <= 0.0) throw ConfigError("solver options: dt must be positive");
  if (base.mpc.replan_every < 1) throw ConfigError("solver options: replan_every must be >= 1");
  return base;
}

}  // namespace coopga::opt
