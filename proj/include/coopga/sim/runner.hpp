// Scenario execution: builds the matching IK or optimal-control problem for
// a parsed scenario, solves it, writes logs, and evaluates the config's
// acceptance thresholds.

#pragma once

#include <algorithm>
#include <filesystem>
#include <optional>
#include <sstream>

#include "coopga/cdts/residuals.hpp"
#include "coopga/opt/gauss_newton.hpp"
#include "coopga/opt/mpc.hpp"
#include "coopga/sim/oracles.hpp"
#include "coopga/sim/runlog.hpp"
#include "coopga/sim/scenario.hpp"

namespace coopga::sim {

struct RunOptions {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iter;
  bool quiet = false;
};

struct RunOutcome {
  bool accepted = false;
  int exit_code = 2;  // 0 success, 2 solver/acceptance failure
  std::string message;
  RunLog log;
  Eigen::VectorXd q_final;
  double final_residual = 0.0;
  double final_constraint = 0.0;
  double ee1_displacement = 0.0;
  double ee2_displacement = 0.0;
};

namespace detail {

inline kin::DualArmSystem make_system(const Scenario& sc) {
  return kin::DualArmSystem(sc.arm1, sc.arm2);
}

inline cga::Multivector make_line(const LineSpec& l) {
  return cga::line_point_direction(l.point, l.direction);
}

inline void apply_overrides(Scenario& sc, const RunOptions& opts) {
  if (opts.seed) sc.solver.seed = *opts.seed;
  if (opts.max_iter) {
    sc.solver.gn.max_iter = *opts.max_iter;
    sc.solver.ilqr.max_iter = *opts.max_iter;
    sc.solver.mpc.ilqr = sc.solver.ilqr;
  }
}

inline void fill_ik_log(RunLog& log, const Scenario& sc, const opt::GnReport& report, int dof) {
  log.mode = RunLog::Mode::kIk;
  log.scenario_name = sc.name;
  log.kind = to_string(sc.kind);
  log.scenario_hash = sc.hash;
  log.seed = sc.solver.seed;
  log.njoints = dof;
  log.ik_rows = report.history;
}

inline void write_outputs(const RunOutcome& out, const Scenario& sc, const RunOptions& opts,
                          const std::string& suffix = "") {
  if (!opts.out_dir) return;
  std::filesystem::create_directories(*opts.out_dir);
  const std::string stem = (std::filesystem::path(*opts.out_dir) / (sc.name + suffix)).string();
  export_csv(out.log, stem + ".csv");
  json meta;
  meta["scenario"] = sc.canonical;
  meta["scenario_hash"] = sc.hash;
  meta["seed"] = sc.solver.seed;
  meta["accepted"] = out.accepted;
  meta["message"] = out.message;
  meta["final_residual"] = out.final_residual;
  meta["final_constraint"] = out.final_constraint;
  std::ofstream metaf(stem + ".meta.json");
  if (!metaf) throw IoError("write_outputs: cannot open '" + stem + ".meta.json'");
  metaf << meta.dump(2) << "\n";
}

inline double displacement(const cga::Vec3& a, const cga::Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

RunOutcome run_balance_plate(const Scenario& sc, const kin::DualArmSystem& sys);

// Shared IK path: solve, log, package.
inline RunOutcome solve_ik(const Scenario& sc, const kin::DualArmSystem& sys,
                           const opt::IkProblem& problem) {
  const opt::GnResult res = opt::gauss_newton(problem, sc.solver.gn);
  RunOutcome out;
  out.q_final = res.q;
  fill_ik_log(out.log, sc, res.report, sys.dof());
  out.final_constraint = res.report.constraint_norm;
  if (!res.report.history.empty()) {
    const auto& first = res.report.history.front();
    const auto& last = res.report.history.back();
    out.ee1_displacement = displacement(first.ee1, last.ee1);
    out.ee2_displacement = displacement(first.ee2, last.ee2);
  }
  std::ostringstream msg;
  msg << "status=" << static_cast<int>(res.report.status) << " iters=" << res.report.iterations
      << " cost=" << res.report.objective_cost << " constraint=" << res.report.constraint_norm
      << " (" << res.report.reason << ")";
  out.message = msg.str();
  return out;
}

}  // namespace detail

inline RunOutcome run_scenario(Scenario sc, const RunOptions& opts = {}) {
  detail::apply_overrides(sc, opts);
  const kin::DualArmSystem sys = detail::make_system(sc);
  const AcceptanceSpec& acc = sc.acceptance;

  RunOutcome out;
  switch (sc.kind) {
    case ScenarioKind::kReachPoint: {
      const cga::Multivector target = cga::embed_point(sc.point);
      opt::IkProblem p;
      p.system = &sys;
      p.q0 = sc.stacked_q0();
      p.objectives.push_back(
          {[target](const cdts::CdtsState& s) { return cdts::residual_pointpair_point(s, target); },
           sc.objective_weight});
      p.guard_enabled = true;
      p.guard_separation = sc.solver.guard_separation;
      out = detail::solve_ik(sc, sys, p);

      cdts::CdtsState sf = cdts::CdtsState::from_stacked(sys, out.q_final);
      out.final_residual = cdts::residual_pointpair_point(sf, target).norm();
      out.accepted = out.final_residual < acc.residual_norm;
      break;
    }
    case ScenarioKind::kReachCircle: {
      const cga::Multivector target = cga::circle(cga::embed_point(sc.circle_points[0]),
                                                  cga::embed_point(sc.circle_points[1]),
                                                  cga::embed_point(sc.circle_points[2]));
      cdts::CdtsState s0(sys, sc.q1_init, sc.q2_init);
      const cga::Motor mr0 = cdts::relative_motor(s0);
      opt::IkProblem p;
      p.system = &sys;
      p.q0 = sc.stacked_q0();
      p.objectives.push_back(
          {[mr0](const cdts::CdtsState& s) {
             return cdts::residual_target_motor(s, mr0, cdts::Frame::kRelative);
           },
           sc.objective_weight});
      p.constraints.push_back(
          [target](const cdts::CdtsState& s) { return cdts::residual_containment(s, target); });
      out = detail::solve_ik(sc, sys, p);

      cdts::CdtsState sf = cdts::CdtsState::from_stacked(sys, out.q_final);
      out.final_residual = cdts::residual_containment(sf, target).norm();
      const CircleGeometry geom =
          circumcircle(sc.circle_points[0], sc.circle_points[1], sc.circle_points[2]);
      const double d1 = circle_distance(geom, sf.ee_position(1));
      const double d2 = circle_distance(geom, sf.ee_position(2));
      out.accepted = out.final_residual < acc.constraint_norm &&
                     d1 <= acc.point_distance && d2 <= acc.point_distance;
      out.message += " circle_dist=(" + std::to_string(d1) + "," + std::to_string(d2) + ")";
      break;
    }
    case ScenarioKind::kReachPlane: {
      const cga::Multivector plane = cga::plane_through_points(
          sc.plane_points[0], sc.plane_points[1], sc.plane_points[2]);
      opt::IkProblem p;
      p.system = &sys;
      p.q0 = sc.stacked_q0();
      p.objectives.push_back(
          {[plane](const cdts::CdtsState& s) { return cdts::residual_containment(s, plane); },
           sc.objective_weight});
      p.guard_enabled = true;
      p.guard_separation = sc.solver.guard_separation;
      out = detail::solve_ik(sc, sys, p);

      cdts::CdtsState sf = cdts::CdtsState::from_stacked(sys, out.q_final);
      out.final_residual = cdts::residual_containment(sf, plane).norm();
      const double d1 = std::abs(plane_distance(sc.plane_points[0], sc.plane_points[1],
                                                sc.plane_points[2], sf.ee_position(1)));
      const double d2 = std::abs(plane_distance(sc.plane_points[0], sc.plane_points[1],
                                                sc.plane_points[2], sf.ee_position(2)));
      out.accepted = d1 <= acc.incidence && d2 <= acc.incidence;
      out.message += " plane_dist=(" + std::to_string(d1) + "," + std::to_string(d2) + ")";
      break;
    }
    case ScenarioKind::kAlignAxis: {
      const cga::Multivector l1 = detail::make_line(sc.line1);
      const cga::Multivector l2 = detail::make_line(sc.line2);
      opt::IkProblem p;
      p.system = &sys;
      p.q0 = sc.stacked_q0();
      p.objectives.push_back(
          {[l1, l2](const cdts::CdtsState& s) { return cdts::residual_line_alignment(s, l1, l2); },
           sc.objective_weight});
      if (sc.absolute_axis_line) {
        const cga::Multivector axis = detail::make_line(*sc.absolute_axis_line);
        p.objectives.push_back(
            {[axis](const cdts::CdtsState& s) { return cdts::residual_absolute_axis(s, axis); },
             sc.secondary_weight});
      }
      out = detail::solve_ik(sc, sys, p);

      cdts::CdtsState sf = cdts::CdtsState::from_stacked(sys, out.q_final);
      out.final_residual = cdts::residual_line_alignment(sf, l1, l2).norm();
      const LineAgreement agree =
          compare_lines(sf.motor1().sandwich(l1), sf.motor2().sandwich(l2));
      out.accepted =
          agree.direction_cross <= acc.direction_cross && agree.moment_error <= acc.moment_error;
      out.message += " cross=" + std::to_string(agree.direction_cross) +
                     " moment=" + std::to_string(agree.moment_error);
      break;
    }
    case ScenarioKind::kBalancePlate: {
      out = detail::run_balance_plate(sc, sys);  // defined below
      break;
    }
  }
  out.exit_code = out.accepted ? 0 : 2;
  detail::write_outputs(out, sc, opts);
  return out;
}

namespace detail {

inline RunOutcome run_balance_plate(const Scenario& sc, const kin::DualArmSystem& sys) {
  const cga::Multivector l1 = make_line(sc.line1);
  const cga::Multivector l2 = make_line(sc.line2);
  const cga::Multivector axis = make_line(*sc.absolute_axis_line);

  cdts::CdtsState s0(sys, sc.q1_init, sc.q2_init);
  const double grasp = sc.grasp_distance > 0.0 ? sc.grasp_distance : s0.ee_separation();

  opt::OcProblem ocp;
  ocp.system = &sys;
  ocp.horizon = sc.solver.horizon;
  ocp.dt = sc.solver.dt;
  ocp.control_weight = Eigen::VectorXd::Constant(sys.dof(), sc.solver.control_weight);
  ocp.velocity_weight = sc.solver.velocity_weight;
  ocp.running = {
      {[l1, l2](const cdts::CdtsState& s) { return cdts::residual_line_alignment(s, l1, l2); },
       sc.objective_weight},
      {[axis](const cdts::CdtsState& s) { return cdts::residual_absolute_axis(s, axis); },
       sc.secondary_weight},
      {[grasp](const cdts::CdtsState& s) { return cdts::residual_distance(s, grasp); },
       sc.distance_weight}};
  ocp.terminal = ocp.running;

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2 * sys.dof());
  x0.head(sys.dof()) = sc.stacked_q0();

  std::vector<opt::Perturbation> schedule;
  for (const auto& ps : sc.perturbations) {
    opt::Perturbation p;
    p.tick = ps.tick;
    p.dx = Eigen::VectorXd::Zero(2 * sys.dof());
    const int base = ps.arm == 1 ? 0 : sys.dof1();
    for (std::size_t k = 0; k < ps.joints.size(); ++k) p.dx(base + ps.joints[k]) = ps.deltas[k];
    schedule.push_back(std::move(p));
  }

  const opt::MpcLog mpc = opt::mpc_loop(ocp, x0, schedule, sc.solver.mpc);

  RunOutcome out;
  out.log.mode = RunLog::Mode::kMpc;
  out.log.scenario_name = sc.name;
  out.log.kind = to_string(sc.kind);
  out.log.scenario_hash = sc.hash;
  out.log.seed = sc.solver.seed;
  out.log.njoints = sys.dof();
  out.log.mpc_rows = mpc.records;
  out.q_final = mpc.records.empty() ? sc.stacked_q0() : mpc.records.back().q;

  const AcceptanceSpec& acc = sc.acceptance;
  double max_dist_dev = 0.0;
  for (const auto& r : mpc.records) max_dist_dev = std::max(max_dist_dev, r.residual_norms(2));
  bool ok = max_dist_dev <= acc.distance_deviation;
  std::ostringstream msg;
  msg << "replans=" << mpc.replans << " failures=" << mpc.failures
      << " max_dist_dev=" << max_dist_dev;

  if (schedule.empty()) {
    double max_res = 0.0;
    for (const auto& r : mpc.records) {
      max_res = std::max(max_res, r.residual_norms.lpNorm<Eigen::Infinity>());
    }
    ok = ok && max_res < acc.equilibrium_residual;
    msg << " max_residual=" << max_res;
  } else {
    int last_pert = 0;
    for (const auto& p : schedule) last_pert = std::max(last_pert, p.tick);
    const int deadline =
        last_pert + static_cast<int>(std::lround(acc.recovery_time / sc.solver.mpc.plant_dt));
    double max_align_after = 0.0;
    bool any_after = false;
    for (const auto& r : mpc.records) {
      if (r.tick >= deadline) {
        max_align_after = std::max(max_align_after, r.residual_norms(0));
        any_after = true;
      }
    }
    ok = ok && any_after && max_align_after < acc.recovery_residual;
    msg << " max_align_after_deadline=" << max_align_after;
  }
  out.final_residual =
      mpc.records.empty() ? 0.0 : mpc.records.back().residual_norms.lpNorm<Eigen::Infinity>();
  out.accepted = ok && mpc.failures == 0;
  out.message = msg.str();
  return out;
}

}  // namespace detail

struct CompareOutcome {
  bool both_accepted = false;
  int exit_code = 2;
  double difference_norm = 0.0;
  RunOutcome stacked;
  RunOutcome cooperative;
  std::string message;
};

// Solves a reach-plane scenario twice: with stacked per-arm point residuals
// and with the cooperative pointpair containment, then contrasts the final
// configurations.
inline CompareOutcome compare_stacked_vs_cooperative(Scenario sc, const RunOptions& opts = {}) {
  if (sc.kind != ScenarioKind::kReachPlane) {
    throw ConfigError("compare: requires a reach_plane scenario");
  }
  detail::apply_overrides(sc, opts);
  const kin::DualArmSystem sys = detail::make_system(sc);
  const cga::Multivector plane =
      cga::plane_through_points(sc.plane_points[0], sc.plane_points[1], sc.plane_points[2]);
  const AcceptanceSpec& acc = sc.acceptance;

  auto evaluate = [&](const opt::IkProblem& p) {
    RunOutcome out = detail::solve_ik(sc, sys, p);
    cdts::CdtsState sf = cdts::CdtsState::from_stacked(sys, out.q_final);
    const double d1 = std::abs(plane_distance(sc.plane_points[0], sc.plane_points[1],
                                              sc.plane_points[2], sf.ee_position(1)));
    const double d2 = std::abs(plane_distance(sc.plane_points[0], sc.plane_points[1],
                                              sc.plane_points[2], sf.ee_position(2)));
    out.final_residual = std::max(d1, d2);
    out.accepted = d1 <= acc.incidence && d2 <= acc.incidence;
    out.exit_code = out.accepted ? 0 : 2;
    return out;
  };

  opt::IkProblem stacked;
  stacked.system = &sys;
  stacked.q0 = sc.stacked_q0();
  stacked.objectives.push_back(
      {[plane](const cdts::CdtsState& s) { return cdts::residual_point_on_primitive(s, plane, 1); },
       sc.objective_weight});
  stacked.objectives.push_back(
      {[plane](const cdts::CdtsState& s) { return cdts::residual_point_on_primitive(s, plane, 2); },
       sc.objective_weight});

  opt::IkProblem coop;
  coop.system = &sys;
  coop.q0 = sc.stacked_q0();
  coop.objectives.push_back(
      {[plane](const cdts::CdtsState& s) { return cdts::residual_containment(s, plane); },
       sc.objective_weight});
  coop.guard_enabled = true;
  coop.guard_separation = sc.solver.guard_separation;

  CompareOutcome out;
  out.stacked = evaluate(stacked);
  out.cooperative = evaluate(coop);
  out.difference_norm = (out.stacked.q_final - out.cooperative.q_final).norm();
  out.both_accepted = out.stacked.accepted && out.cooperative.accepted;
  out.exit_code = out.both_accepted ? 0 : 2;
  std::ostringstream msg;
  msg << "stacked: " << out.stacked.message << "\ncooperative: " << out.cooperative.message
      << "\njoint-space difference norm = " << out.difference_norm;
  out.message = msg.str();

  if (opts.out_dir) {
    detail::write_outputs(out.stacked, sc, opts, "_stacked");
    detail::write_outputs(out.cooperative, sc, opts, "_cooperative");
  }
  return out;
}

inline RunOutcome run_scenario_file(const std::string& path, const RunOptions& opts = {}) {
  return run_scenario(load_scenario_file(path), opts);
}

}  // namespace coopga::sim
