// Declarative scenario configs: two robot placements, a task kind with its
// Euclidean targets, solver options and acceptance thresholds. Targets are
// specified in Euclidean terms (points, point triples, point + direction)
// and converted to conformal primitives on build.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "coopga/kin/robot_io.hpp"
#include "coopga/opt/options.hpp"

namespace coopga::sim {

using cga::Vec3;
using nlohmann::json;

enum class ScenarioKind { kReachPoint, kReachCircle, kReachPlane, kAlignAxis, kBalancePlate };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kReachPoint: return "reach_point";
    case ScenarioKind::kReachCircle: return "reach_circle";
    case ScenarioKind::kReachPlane: return "reach_plane";
    case ScenarioKind::kAlignAxis: return "align_axis";
    case ScenarioKind::kBalancePlate: return "balance_plate";
  }
  return "?";
}

struct LineSpec {
  Vec3 point{0, 0, 0};
  Vec3 direction{1, 0, 0};
};

struct PerturbationSpec {
  int tick = 0;
  int arm = 1;
  std::vector<int> joints;
  std::vector<double> deltas;
};

// Acceptance thresholds; keys are kind-specific, all optional in configs.
struct AcceptanceSpec {
  double residual_norm = 1e-8;       // reach_point
  double constraint_norm = 1e-6;     // reach_circle
  double point_distance = 1e-4;      // reach_circle (circle oracle)
  double incidence = 1e-6;           // reach_plane
  double direction_cross = 1e-6;     // align_axis
  double moment_error = 1e-6;        // align_axis
  double equilibrium_residual = 1e-6;  // balance_plate, no perturbation
  double recovery_residual = 1e-3;     // balance_plate, after perturbation
  double recovery_time = 1.0;          // seconds
  double distance_deviation = 5e-3;    // balance_plate, |E_d| bound
};

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::kReachPoint;
  kin::KinematicChain arm1;
  kin::KinematicChain arm2;
  Eigen::VectorXd q1_init, q2_init;

  // kind-specific targets
  Vec3 point{0, 0, 0};
  std::array<Vec3, 3> circle_points{};
  std::array<Vec3, 3> plane_points{};
  LineSpec line1, line2;                       // align_axis / balance_plate
  std::optional<LineSpec> absolute_axis_line;  // optional Eq.-(25)-style term
  double grasp_distance = 0.0;                 // balance_plate; 0 = derive from q0

  double objective_weight = 1.0;
  double secondary_weight = 1.0;  // absolute-axis term weight
  double distance_weight = 1.0;   // grasp-distance term weight (balance_plate)

  opt::SolverOptions solver;
  AcceptanceSpec acceptance;
  std::vector<PerturbationSpec> perturbations;

  json canonical;            // normalized config (defaults applied)
  std::uint64_t hash = 0;    // FNV-1a over the canonical dump

  Eigen::VectorXd stacked_q0() const {
    Eigen::VectorXd q(q1_init.size() + q2_init.size());
    q << q1_init, q2_init;
    return q;
  }
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline Vec3 get_vec3(const json& j, const std::string& where) {
  return kin::detail::parse_vec3(j, where);
}

inline json vec3_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

inline bool collinear(const Vec3& a, const Vec3& b, const Vec3& c, double tol = 1e-9) {
  const Vec3 u = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const Vec3 v = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  const double cx = u[1] * v[2] - u[2] * v[1];
  const double cy = u[2] * v[0] - u[0] * v[2];
  const double cz = u[0] * v[1] - u[1] * v[0];
  return std::sqrt(cx * cx + cy * cy + cz * cz) <= tol;
}

inline LineSpec parse_line(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("point") || !j.contains("direction")) {
    throw ConfigError(where + ": expected {point, direction}");
  }
  LineSpec l;
  l.point = get_vec3(j["point"], where + ".point");
  l.direction = get_vec3(j["direction"], where + ".direction");
  const double n = std::sqrt(l.direction[0] * l.direction[0] + l.direction[1] * l.direction[1] +
                             l.direction[2] * l.direction[2]);
  if (n < 1e-9) throw ConfigError(where + ".direction: zero-length line direction");
  return l;
}

inline json line_json(const LineSpec& l) {
  return json{{"point", vec3_json(l.point)}, {"direction", vec3_json(l.direction)}};
}

inline Eigen::VectorXd parse_joint_vector(const json& j, int dof, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dof) {
    throw ConfigError(where + ": expected an array of " + std::to_string(dof) + " joint values");
  }
  Eigen::VectorXd q(dof);
  for (int i = 0; i < dof; ++i) q(i) = j[i].get<double>();
  return q;
}

inline kin::KinematicChain load_arm(const json& j, const std::filesystem::path& base_dir,
                                    const std::string& where) {
  if (!j.is_object() || !j.contains("file")) {
    throw ConfigError(where + ": expected {file, base_pose}");
  }
  std::filesystem::path file = j["file"].get<std::string>();
  if (file.is_relative()) file = base_dir / file;
  kin::KinematicChain chain = kin::load_robot_file(file.string());
  if (j.contains("base_pose")) {
    chain = chain.with_base(kin::detail::parse_pose(j["base_pose"], where + ".base_pose"));
  }
  return chain;
}

}  // namespace detail

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_scenario: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("load_scenario: parse error in '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw ConfigError("load_scenario: top level must be an object");

  const std::filesystem::path base_dir = std::filesystem::path(path).parent_path();
  const std::string kind_str = j.value("kind", "");
  ScenarioKind kind;
  if (kind_str == "reach_point") kind = ScenarioKind::kReachPoint;
  else if (kind_str == "reach_circle") kind = ScenarioKind::kReachCircle;
  else if (kind_str == "reach_plane") kind = ScenarioKind::kReachPlane;
  else if (kind_str == "align_axis") kind = ScenarioKind::kAlignAxis;
  else if (kind_str == "balance_plate") kind = ScenarioKind::kBalancePlate;
  else throw ConfigError("scenario.kind: unknown kind '" + kind_str + "'");

  if (!j.contains("robots") || !j["robots"].contains("arm1") || !j["robots"].contains("arm2")) {
    throw ConfigError("scenario.robots: requires arm1 and arm2");
  }

  kin::KinematicChain arm1 = detail::load_arm(j["robots"]["arm1"], base_dir, "robots.arm1");
  kin::KinematicChain arm2 = detail::load_arm(j["robots"]["arm2"], base_dir, "robots.arm2");

  if (!j.contains("initial_q")) throw ConfigError("scenario: missing initial_q");
  Eigen::VectorXd q1 =
      detail::parse_joint_vector(j["initial_q"].value("arm1", json::array()), arm1.dof(),
                                 "initial_q.arm1");
  Eigen::VectorXd q2 =
      detail::parse_joint_vector(j["initial_q"].value("arm2", json::array()), arm2.dof(),
                                 "initial_q.arm2");

  Scenario sc{.name = j.value("name", std::filesystem::path(path).stem().string()),
              .kind = kind,
              .arm1 = std::move(arm1),
              .arm2 = std::move(arm2),
              .q1_init = std::move(q1),
              .q2_init = std::move(q2)};

  const json target = j.value("target", json::object());
  switch (kind) {
    case ScenarioKind::kReachPoint:
      if (!target.contains("point")) throw ConfigError("target.point required for reach_point");
      sc.point = detail::get_vec3(target["point"], "target.point");
      break;
    case ScenarioKind::kReachCircle: {
      if (!target.contains("circle_points") || !target["circle_points"].is_array() ||
          target["circle_points"].size() != 3) {
        throw ConfigError("target.circle_points: expected three points");
      }
      for (int i = 0; i < 3; ++i) {
        sc.circle_points[i] =
            detail::get_vec3(target["circle_points"][i], "target.circle_points");
      }
      if (detail::collinear(sc.circle_points[0], sc.circle_points[1], sc.circle_points[2])) {
        throw ConfigError("target.circle_points: points are collinear");
      }
      break;
    }
    case ScenarioKind::kReachPlane: {
      if (!target.contains("plane_points") || !target["plane_points"].is_array() ||
          target["plane_points"].size() != 3) {
        throw ConfigError("target.plane_points: expected three points");
      }
      for (int i = 0; i < 3; ++i) {
        sc.plane_points[i] = detail::get_vec3(target["plane_points"][i], "target.plane_points");
      }
      if (detail::collinear(sc.plane_points[0], sc.plane_points[1], sc.plane_points[2])) {
        throw ConfigError("target.plane_points: points are collinear");
      }
      break;
    }
    case ScenarioKind::kAlignAxis:
    case ScenarioKind::kBalancePlate:
      if (target.contains("line1")) sc.line1 = detail::parse_line(target["line1"], "target.line1");
      if (target.contains("line2")) sc.line2 = detail::parse_line(target["line2"], "target.line2");
      if (target.contains("absolute_axis_line")) {
        sc.absolute_axis_line =
            detail::parse_line(target["absolute_axis_line"], "target.absolute_axis_line");
      } else if (kind == ScenarioKind::kBalancePlate) {
        sc.absolute_axis_line = LineSpec{{0, 0, 0}, {0, 0, 1}};  // keep the plate level
      }
      if (kind == ScenarioKind::kBalancePlate && target.contains("grasp_distance")) {
        sc.grasp_distance = target["grasp_distance"].get<double>();
        if (sc.grasp_distance <= 0.0) throw ConfigError("target.grasp_distance must be positive");
      }
      break;
  }

  if (j.contains("weights")) {
    sc.objective_weight = j["weights"].value("objective", 1.0);
    sc.secondary_weight = j["weights"].value("secondary", 1.0);
    sc.distance_weight = j["weights"].value("distance", 1.0);
    if (sc.objective_weight <= 0.0 || sc.secondary_weight <= 0.0 || sc.distance_weight <= 0.0) {
      throw ConfigError("weights: must be positive");
    }
  }

  sc.solver = opt::parse_solver_options(j.value("solver", json()));

  if (j.contains("acceptance")) {
    const json& a = j["acceptance"];
    AcceptanceSpec& ac = sc.acceptance;
    ac.residual_norm = a.value("residual_norm", ac.residual_norm);
    ac.constraint_norm = a.value("constraint_norm", ac.constraint_norm);
    ac.point_distance = a.value("point_distance", ac.point_distance);
    ac.incidence = a.value("incidence", ac.incidence);
    ac.direction_cross = a.value("direction_cross", ac.direction_cross);
    ac.moment_error = a.value("moment_error", ac.moment_error);
    ac.equilibrium_residual = a.value("equilibrium_residual", ac.equilibrium_residual);
    ac.recovery_residual = a.value("recovery_residual", ac.recovery_residual);
    ac.recovery_time = a.value("recovery_time", ac.recovery_time);
    ac.distance_deviation = a.value("distance_deviation", ac.distance_deviation);
  }

  if (j.contains("perturbations")) {
    if (kind != ScenarioKind::kBalancePlate) {
      throw ConfigError("perturbations: only valid for balance_plate");
    }
    for (const auto& p : j["perturbations"]) {
      PerturbationSpec ps;
      ps.tick = p.value("tick", 0);
      ps.arm = p.value("arm", 1);
      if (ps.arm != 1 && ps.arm != 2) throw ConfigError("perturbations.arm: must be 1 or 2");
      if (!p.contains("joints") || !p.contains("deltas") ||
          p["joints"].size() != p["deltas"].size()) {
        throw ConfigError("perturbations: joints and deltas must match in length");
      }
      for (const auto& idx : p["joints"]) ps.joints.push_back(idx.get<int>());
      for (const auto& d : p["deltas"]) ps.deltas.push_back(d.get<double>());
      const int dof = ps.arm == 1 ? sc.arm1.dof() : sc.arm2.dof();
      for (int idx : ps.joints) {
        if (idx < 0 || idx >= dof) throw ConfigError("perturbations.joints: index out of range");
      }
      sc.perturbations.push_back(std::move(ps));
    }
  }

  // Canonical normalized form: defaults applied, keys sorted by nlohmann's
  // object ordering; the hash is stable across formatting variants.
  json canon;
  canon["kind"] = to_string(sc.kind);
  canon["name"] = sc.name;
  canon["q1"] = std::vector<double>(sc.q1_init.data(), sc.q1_init.data() + sc.q1_init.size());
  canon["q2"] = std::vector<double>(sc.q2_init.data(), sc.q2_init.data() + sc.q2_init.size());
  switch (sc.kind) {
    case ScenarioKind::kReachPoint: canon["point"] = detail::vec3_json(sc.point); break;
    case ScenarioKind::kReachCircle:
      canon["circle_points"] = {detail::vec3_json(sc.circle_points[0]),
                                detail::vec3_json(sc.circle_points[1]),
                                detail::vec3_json(sc.circle_points[2])};
      break;
    case ScenarioKind::kReachPlane:
      canon["plane_points"] = {detail::vec3_json(sc.plane_points[0]),
                               detail::vec3_json(sc.plane_points[1]),
                               detail::vec3_json(sc.plane_points[2])};
      break;
    case ScenarioKind::kAlignAxis:
    case ScenarioKind::kBalancePlate:
      canon["line1"] = detail::line_json(sc.line1);
      canon["line2"] = detail::line_json(sc.line2);
      if (sc.absolute_axis_line) {
        canon["absolute_axis_line"] = detail::line_json(*sc.absolute_axis_line);
      }
      canon["grasp_distance"] = sc.grasp_distance;
      break;
  }
  canon["weights"] = {{"objective", sc.objective_weight},
                      {"secondary", sc.secondary_weight},
                      {"distance", sc.distance_weight}};
  canon["solver"] = {{"max_iter", sc.solver.gn.max_iter},
                     {"constraint_tol", sc.solver.gn.constraint_tol},
                     {"horizon", sc.solver.horizon},
                     {"dt", sc.solver.dt},
                     {"steps", sc.solver.mpc.steps},
                     {"replan_every", sc.solver.mpc.replan_every},
                     {"plant_dt", sc.solver.mpc.plant_dt},
                     {"control_weight", sc.solver.control_weight},
                     {"velocity_weight", sc.solver.velocity_weight},
                     {"seed", sc.solver.seed}};
  for (const auto& p : sc.perturbations) {
    canon["perturbations"].push_back(
        {{"tick", p.tick}, {"arm", p.arm}, {"joints", p.joints}, {"deltas", p.deltas}});
  }
  sc.canonical = canon;
  sc.hash = detail::fnv1a(canon.dump());
  return sc;
}

}  // namespace coopga::sim
