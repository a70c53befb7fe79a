// Inverse-kinematics problem description: weighted residual objectives plus
// equality constraints (residuals driven to zero), over the stacked joint
// vector of a dual-arm system.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "coopga/cdts/residuals.hpp"
#include "coopga/errors.hpp"

namespace coopga::opt {

using ResidualBuilder = std::function<cdts::Residual(const cdts::CdtsState&)>;

struct WeightedResidual {
  ResidualBuilder build;
  double weight = 1.0;
};

struct IkProblem {
  const kin::DualArmSystem* system = nullptr;
  std::vector<WeightedResidual> objectives;
  std::vector<ResidualBuilder> constraints;
  Eigen::VectorXd q0;

  // Pointpair singularity guard: when enabled and no distance constraint is
  // configured, iterates with end-effector separation at or below
  // guard_separation abort with a singularity status.
  bool guard_enabled = false;
  double guard_separation = 0.01;

  void validate() const {
    if (system == nullptr) throw ConfigError("IkProblem: missing system");
    if (objectives.empty() && constraints.empty()) {
      throw ConfigError("IkProblem: at least one objective or constraint required");
    }
    for (const auto& o : objectives) {
      if (o.weight <= 0.0) throw ConfigError("IkProblem: objective weights must be positive");
      if (!o.build) throw ConfigError("IkProblem: empty objective builder");
    }
    for (const auto& c : constraints) {
      if (!c) throw ConfigError("IkProblem: empty constraint builder");
    }
    if (q0.size() != system->dof()) {
      throw DimensionError("IkProblem: q0 size does not match system dof");
    }
  }
};

// Separation check backing the guard. Trips on separation <= eps (closed
// threshold).
struct SeparationCheck {
  bool tripped = false;
  double separation = 0.0;
};

inline SeparationCheck check_pointpair_separation(const cdts::CdtsState& s, double eps) {
  SeparationCheck c;
  c.separation = s.ee_separation();
  c.tripped = c.separation <= eps;
  return c;
}

// Hard guard per the task-space contract: throws when the cooperative
// pointpair degenerates (end-effector separation at or below eps).
inline void pointpair_singularity_guard(const cdts::CdtsState& s, double eps) {
  const SeparationCheck c = check_pointpair_separation(s, eps);
  if (c.tripped) {
    throw SingularityError("cooperative pointpair singular: end-effector separation " +
                           std::to_string(c.separation) + " m <= " + std::to_string(eps) + " m");
  }
}

}  // namespace coopga::opt
