#include <catch2/catch_amalgamated.hpp>

#include "coopga/kin/robot_io.hpp"
#include "coopga/opt/gauss_newton.hpp"
#include "coopga/opt/mpc.hpp"
#include "support/test_oracles.hpp"

using namespace coopga;
using cdts::CdtsState;
using cdts::Residual;

namespace {

const std::string kPandaFile = std::string(COOPGA_CONFIG_DIR) + "/panda.json";

kin::DualArmSystem dual_panda() {
  const kin::KinematicChain chain = kin::load_robot_file(kPandaFile);
  const cga::Motor base1 =
      cga::Motor::translator({0, 0.5, 0}) * cga::Motor::rotor({0, 0, 1}, -M_PI / 2);
  const cga::Motor base2 =
      cga::Motor::translator({0, -0.5, 0}) * cga::Motor::rotor({0, 0, 1}, M_PI / 2);
  return kin::DualArmSystem(chain.with_base(base1), chain.with_base(base2));
}

// Two single-revolute arms; handy for exactly-LQ optimal control problems.
kin::DualArmSystem toy_system() {
  kin::JointDescription j;
  j.axis = kin::revolute_axis({0, 0, 1}, {0, 0, 0});
  j.offset = cga::Motor::translator({1, 0, 0});
  const kin::KinematicChain arm1({j}, cga::Motor::translator({0, 0.4, 0}));
  const kin::KinematicChain arm2({j}, cga::Motor::translator({0, -0.4, 0}));
  return kin::DualArmSystem(arm1, arm2);
}

Eigen::VectorXd tucked_q() {
  Eigen::VectorXd q(14);
  q << 0, -1.3, 0, -2.7, 0, 1.6, M_PI / 4, 0, -1.3, 0, -2.7, 0, 1.6, M_PI / 4;
  return q;
}

Eigen::VectorXd counter_rolled_home() {
  Eigen::VectorXd q(14);
  q << 0, -M_PI / 4, 0, -3 * M_PI / 4, 0, M_PI / 2, 3 * M_PI / 4, 0, -M_PI / 4, 0, -3 * M_PI / 4,
      0, M_PI / 2, -M_PI / 4;
  return q;
}

// Linear residual q - q_target over the stacked joints, for LQ oracles.
opt::ResidualBuilder linear_posture(const Eigen::VectorXd& target) {
  return [target](const CdtsState& s) {
    Residual r;
    const Eigen::VectorXd q = s.stacked();
    // two joints fit in the scalar + pseudoscalar slots
    r.value = cga::Multivector();
    r.value[cga::kSlotScalar] = q(0) - target(0);
    r.value[cga::kSlotPss] = q(1) - target(1);
    r.jacobian = cdts::MultivectorJacobian(2);
    r.jacobian.col(0)[cga::kSlotScalar] = 1.0;
    r.jacobian.col(1)[cga::kSlotPss] = 1.0;
    r.slot_mask = (1u << cga::kSlotScalar) | (1u << cga::kSlotPss);
    return r;
  };
}

}  // namespace

TEST_CASE("gauss_newton returns immediately at an optimal start") {
  const kin::DualArmSystem sys = dual_panda();
  CdtsState s0 = CdtsState::from_stacked(sys, tucked_q());
  const cga::Multivector target = s0.ee_point(1);  // wedge with own point: zero residual

  opt::IkProblem p;
  p.system = &sys;
  p.q0 = tucked_q();
  p.objectives.push_back(
      {[target](const CdtsState& s) { return cdts::residual_pointpair_point(s, target); }, 1.0});
  const opt::GnResult r = opt::gauss_newton(p);
  CHECK(r.report.status == opt::GnStatus::kConverged);
  CHECK(r.report.iterations <= 1);
  CHECK((r.q - p.q0).norm() == 0.0);
}

TEST_CASE("gauss_newton solves cooperative point reaching; nearer arm moves more") {
  const kin::DualArmSystem sys = dual_panda();
  for (double side : {1.0, -1.0}) {
    const cga::Multivector target = cga::embed_point(0.0, side * 0.4827, 0.8019);
    opt::IkProblem p;
    p.system = &sys;
    p.q0 = tucked_q();
    p.objectives.push_back(
        {[target](const CdtsState& s) { return cdts::residual_pointpair_point(s, target); },
         1.0});
    p.guard_enabled = true;
    const opt::GnResult r = opt::gauss_newton(p);
    REQUIRE(r.report.status == opt::GnStatus::kConverged);
    CHECK(r.report.iterations <= 200);

    CdtsState sf = CdtsState::from_stacked(sys, r.q);
    CHECK(cdts::residual_pointpair_point(sf, target).norm() < 1e-8);

    const auto& first = r.report.history.front();
    const auto& last = r.report.history.back();
    auto disp = [](const cga::Vec3& a, const cga::Vec3& b) {
      double s = 0;
      for (int i = 0; i < 3; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
      return std::sqrt(s);
    };
    const double d1 = disp(first.ee1, last.ee1);
    const double d2 = disp(first.ee2, last.ee2);
    if (side > 0) {
      CHECK(d1 > d2);  // target is nearer arm 1
    } else {
      CHECK(d2 > d1);
    }
  }
}

TEST_CASE("gauss_newton accepted iterates never increase the merit") {
  const kin::DualArmSystem sys = dual_panda();
  const cga::Multivector target = cga::embed_point(0.0, 0.4827, 0.8019);
  opt::IkProblem p;
  p.system = &sys;
  p.q0 = tucked_q();
  p.objectives.push_back(
      {[target](const CdtsState& s) { return cdts::residual_pointpair_point(s, target); }, 1.0});
  const opt::GnResult r = opt::gauss_newton(p);
  for (std::size_t i = 1; i < r.report.history.size(); ++i) {
    CHECK(r.report.history[i].cost <= r.report.history[i - 1].cost * (1.0 + 1e-14));
  }
}

TEST_CASE("gauss_newton with a circle constraint meets tolerance") {
  const kin::DualArmSystem sys = dual_panda();
  const cga::Multivector circle =
      cga::circle(cga::embed_point(0.25, 0, 0.55), cga::embed_point(-0.25, 0, 0.55),
                  cga::embed_point(0, 0.25, 0.55));
  CdtsState s0 = CdtsState::from_stacked(sys, counter_rolled_home());
  const cga::Motor mr0 = cdts::relative_motor(s0);

  opt::IkProblem p;
  p.system = &sys;
  p.q0 = counter_rolled_home();
  p.objectives.push_back(
      {[mr0](const CdtsState& s) {
         return cdts::residual_target_motor(s, mr0, cdts::Frame::kRelative);
       },
       1.0});
  p.constraints.push_back(
      [circle](const CdtsState& s) { return cdts::residual_containment(s, circle); });
  const opt::GnResult r = opt::gauss_newton(p);
  CHECK(r.report.status == opt::GnStatus::kConverged);
  CHECK(r.report.constraint_norm < 1e-6);

  // both end-effector points on the circle: plane z = 0.55, center 0, r = 0.25
  CdtsState sf = CdtsState::from_stacked(sys, r.q);
  for (int arm : {1, 2}) {
    const cga::Vec3 x = sf.ee_position(arm);
    CHECK(std::abs(x[2] - 0.55) <= 1e-6);
    CHECK(std::abs(std::sqrt(x[0] * x[0] + x[1] * x[1]) - 0.25) <= 1e-6);
  }
}

TEST_CASE("gauss_newton respects joint limits when enabled") {
  const kin::DualArmSystem sys = dual_panda();
  const cga::Multivector target = cga::embed_point(0.0, 0.4827, 0.8019);
  opt::IkProblem p;
  p.system = &sys;
  p.q0 = tucked_q();
  p.objectives.push_back(
      {[target](const CdtsState& s) { return cdts::residual_pointpair_point(s, target); }, 1.0});
  opt::GaussNewtonOptions o;
  o.enforce_limits = true;
  const opt::GnResult r = opt::gauss_newton(p, o);
  auto [q1, q2] = sys.split(r.q);
  CHECK(sys.arm1().within_limits(q1));
  CHECK(sys.arm2().within_limits(q2));
}

TEST_CASE("gauss_newton is deterministic") {
  const kin::DualArmSystem sys = dual_panda();
  const cga::Multivector target = cga::embed_point(0.0, 0.4827, 0.8019);
  opt::IkProblem p;
  p.system = &sys;
  p.q0 = tucked_q();
  p.objectives.push_back(
      {[target](const CdtsState& s) { return cdts::residual_pointpair_point(s, target); }, 1.0});
  const opt::GnResult a = opt::gauss_newton(p);
  const opt::GnResult b = opt::gauss_newton(p);
  REQUIRE(a.report.history.size() == b.report.history.size());
  CHECK((a.q - b.q).norm() == 0.0);
  for (std::size_t i = 0; i < a.report.history.size(); ++i) {
    CHECK(a.report.history[i].cost == b.report.history[i].cost);
    CHECK((a.report.history[i].q - b.report.history[i].q).norm() == 0.0);
  }
}

TEST_CASE("pointpair singularity guard") {
  const kin::DualArmSystem sys = toy_system();
  Eigen::VectorXd q = Eigen::VectorXd::Zero(2);
  CdtsState s = CdtsState::from_stacked(sys, q);
  REQUIRE_THAT(s.ee_separation(), Catch::Matchers::WithinAbs(0.8, 1e-12));

  CHECK_FALSE(opt::check_pointpair_separation(s, 0.01).tripped);
  CHECK_NOTHROW(opt::pointpair_singularity_guard(s, 0.5));
  // closed threshold: trips at exactly the computed separation
  const double sep = s.ee_separation();
  CHECK(opt::check_pointpair_separation(s, sep).tripped);
  CHECK_THROWS_AS(opt::pointpair_singularity_guard(s, sep), SingularityError);
  CHECK_FALSE(opt::check_pointpair_separation(s, std::nextafter(sep, 0.0)).tripped);

  // coincident end-effectors always trip
  Eigen::VectorXd qc(2);
  qc << -0.5, 0.5;
  CdtsState sc = CdtsState::from_stacked(sys, qc);
  // rotate both arms toward each other until the points coincide? not with
  // these chains; instead shrink the threshold to the current separation
  CHECK(opt::check_pointpair_separation(sc, sc.ee_separation()).tripped);

  // solver surfaces the guard as a singularity status
  const cga::Multivector target = cga::embed_point(0, 0, 0.5);
  opt::IkProblem p;
  p.system = &sys;
  p.q0 = q;
  p.objectives.push_back(
      {[target](const CdtsState& ss) { return cdts::residual_pointpair_point(ss, target); },
       1.0});
  p.guard_enabled = true;
  p.guard_separation = 0.9;  // already below threshold at the start
  const opt::GnResult r = opt::gauss_newton(p);
  CHECK(r.report.status == opt::GnStatus::kSingularity);
}

TEST_CASE("rollout: exact semi-implicit integration") {
  const kin::DualArmSystem sys = toy_system();
  opt::OcProblem ocp;
  ocp.system = &sys;
  ocp.horizon = 25;
  ocp.dt = 0.01;
  ocp.control_weight = Eigen::VectorXd::Constant(2, 1.0);

  // zero controls, zero velocity: constant state
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(4);
  x0(0) = 0.3;
  const opt::Trajectory still = opt::rollout(ocp, x0, Eigen::MatrixXd::Zero(2, 25));
  for (int k = 0; k <= 25; ++k) CHECK((still.states.col(k) - x0).norm() == 0.0);

  // constant unit acceleration on joint 0 from rest
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(2, 25);
  u.row(0).setOnes();
  const opt::Trajectory traj = opt::rollout(ocp, Eigen::VectorXd::Zero(4), u);
  for (int k = 1; k <= 25; ++k) {
    const double want_v = k * ocp.dt;
    const double want_q = ocp.dt * ocp.dt * 0.5 * k * (k + 1);
    CHECK_THAT(traj.states(2, k), Catch::Matchers::WithinAbs(want_v, 1e-15));
    CHECK_THAT(traj.states(0, k), Catch::Matchers::WithinAbs(want_q, 1e-14));
  }

  // dynamics defect of the returned rollout is exactly zero
  for (int k = 0; k < 25; ++k) {
    const Eigen::VectorXd next = ocp.step(traj.states.col(k), traj.controls.col(k));
    CHECK((traj.states.col(k + 1) - next).norm() == 0.0);
  }
}

TEST_CASE("ilqr returns zero controls when residuals vanish") {
  const kin::DualArmSystem sys = toy_system();
  opt::OcProblem ocp;
  ocp.system = &sys;
  ocp.horizon = 10;
  ocp.dt = 0.01;
  ocp.control_weight = Eigen::VectorXd::Constant(2, 1.0);
  // no residuals at all: pure control cost
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(4);
  const opt::IlqrResult r = opt::ilqr(ocp, x0, Eigen::MatrixXd::Zero(2, 10));
  CHECK(r.report.converged);
  CHECK(r.trajectory.controls.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ilqr reproduces the Riccati solution on an exactly-LQ problem") {
  const kin::DualArmSystem sys = toy_system();
  Eigen::VectorXd qt(2);
  qt << 0.4, -0.2;

  opt::OcProblem ocp;
  ocp.system = &sys;
  ocp.horizon = 20;
  ocp.dt = 0.05;
  ocp.control_weight = Eigen::VectorXd::Constant(2, 0.5);
  ocp.terminal = {{linear_posture(qt), 3.0}};

  Eigen::VectorXd x0(4);
  x0 << -0.3, 0.1, 0.0, 0.0;
  const opt::IlqrResult got = opt::ilqr(ocp, x0, Eigen::MatrixXd::Zero(2, 20));
  REQUIRE(got.report.converged);

  // Riccati oracle over the shifted state z = x - (qt, 0): terminal cost
  // 3 |z_q|^2, control cost 0.5 |u|^2 per step.
  const Eigen::MatrixXd A = ocp.dynamics_state_matrix();
  const Eigen::MatrixXd B = ocp.dynamics_control_matrix();
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(4, 4);
  Eigen::MatrixXd Qf = Eigen::MatrixXd::Zero(4, 4);
  Qf.topLeftCorner(2, 2) = 3.0 * Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd R = 0.5 * Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd z0 = x0;
  z0.head(2) -= qt;
  const Eigen::MatrixXd want = oracle::riccati_controls(A, B, Q, R, Qf, z0, 20);
  CHECK((got.trajectory.controls - want).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("ilqr solves the plate-balancing OCP with decreasing cost") {
  const kin::DualArmSystem sys = dual_panda();
  Eigen::VectorXd q0(14);
  q0 << -0.024032404565226765, -0.55437737066364634, -0.28060224903925446, -2.2733662708624558,
      -0.12338435251262007, 1.6930069120260443, 2.1013405334936954, -0.024032404557959786,
      -0.55437737067700654, -0.28060224905733838, -2.2733662708692055, -0.12338435252533962,
      1.6930069120215856, -1.0402521201010411;
  const cga::Multivector xline = cga::line_point_direction({0, 0, 0}, {1, 0, 0});
  const cga::Multivector zline = cga::line_point_direction({0, 0, 0}, {0, 0, 1});

  opt::OcProblem ocp;
  ocp.system = &sys;
  ocp.horizon = 10;
  ocp.dt = 0.01;
  ocp.control_weight = Eigen::VectorXd::Constant(14, 1e-2);
  ocp.running = {
      {[&](const CdtsState& s) { return cdts::residual_line_alignment(s, xline, xline); }, 1e4},
      {[&](const CdtsState& s) { return cdts::residual_absolute_axis(s, zline); }, 1e4},
      {[&](const CdtsState& s) { return cdts::residual_distance(s, 0.4); }, 2e5}};
  ocp.terminal = ocp.running;

  // start displaced from the feasible grasp
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(28);
  x0.head(14) = q0;
  x0(5) += 0.05;
  x0(6) += 0.05;
  const double initial_cost =
      opt::trajectory_cost(ocp, opt::rollout(ocp, x0, Eigen::MatrixXd::Zero(14, 10)));
  const opt::IlqrResult r = opt::ilqr(ocp, x0, Eigen::MatrixXd::Zero(14, 10));
  CHECK(r.report.cost < initial_cost);
  CHECK(r.report.iterations >= 1);
  CHECK(r.trajectory.step_residual_norms(10) < r.trajectory.step_residual_norms(0));
}

TEST_CASE("mpc holds a feasible equilibrium") {
  const kin::DualArmSystem sys = dual_panda();
  Eigen::VectorXd q0(14);
  q0 << -0.024032404565226765, -0.55437737066364634, -0.28060224903925446, -2.2733662708624558,
      -0.12338435251262007, 1.6930069120260443, 2.1013405334936954, -0.024032404557959786,
      -0.55437737067700654, -0.28060224905733838, -2.2733662708692055, -0.12338435252533962,
      1.6930069120215856, -1.0402521201010411;
  const cga::Multivector xline = cga::line_point_direction({0, 0, 0}, {1, 0, 0});
  const cga::Multivector zline = cga::line_point_direction({0, 0, 0}, {0, 0, 1});

  opt::OcProblem ocp;
  ocp.system = &sys;
  ocp.horizon = 10;
  ocp.dt = 0.01;
  ocp.control_weight = Eigen::VectorXd::Constant(14, 1e-2);
  ocp.running = {
      {[&](const CdtsState& s) { return cdts::residual_line_alignment(s, xline, xline); }, 1e4},
      {[&](const CdtsState& s) { return cdts::residual_absolute_axis(s, zline); }, 1e4},
      {[&](const CdtsState& s) { return cdts::residual_distance(s, 0.4); }, 2e5}};
  ocp.terminal = ocp.running;

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(28);
  x0.head(14) = q0;
  opt::MpcOptions mo;
  mo.steps = 100;  // short hold; the acceptance suite runs the full 500
  const opt::MpcLog log = opt::mpc_loop(ocp, x0, {}, mo);
  CHECK(log.failures == 0);
  for (const auto& rec : log.records) {
    CHECK(rec.residual_norms.lpNorm<Eigen::Infinity>() < 1e-6);
    CHECK(rec.u.lpNorm<Eigen::Infinity>() < 1e-8);
  }
}

TEST_CASE("mpc with replan_every equal to the horizon degenerates to open-loop segments") {
  const kin::DualArmSystem sys = toy_system();
  opt::OcProblem ocp;
  ocp.system = &sys;
  ocp.horizon = 5;
  ocp.dt = 0.01;
  ocp.control_weight = Eigen::VectorXd::Constant(2, 1.0);
  Eigen::VectorXd qt(2);
  qt << 0.2, 0.1;
  ocp.terminal = {{linear_posture(qt), 1.0}};

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(4);
  opt::MpcOptions mo;
  mo.plant_dt = 0.01;   // plant tick = one OCP step
  mo.replan_every = 5;  // = horizon
  mo.steps = 20;
  const opt::MpcLog log = opt::mpc_loop(ocp, x0, {}, mo);
  CHECK(log.replans == 4);
  CHECK(static_cast<int>(log.records.size()) == 20);
}

TEST_CASE("invalid problems are rejected") {
  const kin::DualArmSystem sys = toy_system();
  opt::IkProblem empty;
  empty.system = &sys;
  empty.q0 = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(opt::gauss_newton(empty), ConfigError);

  opt::OcProblem bad;
  bad.system = &sys;
  bad.horizon = 0;
  bad.control_weight = Eigen::VectorXd::Constant(2, 1.0);
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  opt::OcProblem negr;
  negr.system = &sys;
  negr.control_weight = Eigen::VectorXd::Constant(2, -1.0);
  CHECK_THROWS_AS(negr.validate(), ConfigError);
}
