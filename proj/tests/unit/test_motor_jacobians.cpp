#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "coopga/cga/motor_jacobians.hpp"
#include "support/test_oracles.hpp"

using namespace coopga::cga;

namespace {

Bivector random_bivector(std::mt19937_64& rng, double rot_scale, double trans_scale = 1.0) {
  std::uniform_real_distribution<double> r(-rot_scale, rot_scale);
  std::uniform_real_distribution<double> t(-trans_scale, trans_scale);
  return Bivector(r(rng), r(rng), r(rng), t(rng), t(rng), t(rng));
}

Eigen::Matrix<double, 8, 6> fd_exp_jacobian(const Bivector& b, double h = 1e-6) {
  Eigen::Matrix<double, 8, 6> jac;
  for (int j = 0; j < 6; ++j) {
    Bivector bp = b, bm = b;
    bp[j] += h;
    bm[j] -= h;
    const Motor mp = motor_exp(bp);
    const Motor mm = motor_exp(bm);
    for (int i = 0; i < 8; ++i) jac(i, j) = (mp[i] - mm[i]) / (2.0 * h);
  }
  return jac;
}

Eigen::Matrix<double, 6, 8> fd_log_jacobian(const Motor& m, double h = 1e-6) {
  Eigen::Matrix<double, 6, 8> jac;
  for (int j = 0; j < 8; ++j) {
    Motor mp = m, mm = m;
    mp[j] += h;
    mm[j] -= h;
    const Bivector bp = motor_log(mp, 1e-3);
    const Bivector bm = motor_log(mm, 1e-3);
    for (int i = 0; i < 6; ++i) jac(i, j) = (bp[i] - bm[i]) / (2.0 * h);
  }
  return jac;
}

}  // namespace

TEST_CASE("exp Jacobian at zero has the first-order identity block") {
  const ExpJacobian j = exp_jacobian(Bivector());
  // exp(B) ~ 1 + B: each bivector coefficient maps to its own motor slot.
  Eigen::Matrix<double, 8, 6> want = Eigen::Matrix<double, 8, 6>::Zero();
  for (int k = 0; k < 6; ++k) want(1 + k, k) = 1.0;
  CHECK((j - want).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("exp Jacobian matches central finite differences") {
  auto rng = oracle::test_rng(31);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Bivector b = random_bivector(rng, 1.2, 2.0);
    worst = std::max(worst,
                     oracle::max_relative_error(exp_jacobian(b), fd_exp_jacobian(b)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("rotational block agrees with the quaternion exponential derivative") {
  // For a pure rotation bivector, the motor is the quaternion
  // exp(v) = (cos|v|, sinc|v| v) under the blade/imaginary-unit mapping
  // scalar=w, e12=-z, e13=y, e23=-x with v = (-b23, b13, -b12).
  auto rng = oracle::test_rng(32);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; };
  for (int k = 0; k < 50; ++k) {
    const Bivector b(u(rng), u(rng), u(rng), 0, 0, 0);
    const Eigen::Vector3d v(-b[2], b[1], -b[0]);
    const double a = v.norm();
    // quaternion exp Jacobian: d(w, xyz)/dv
    Eigen::Matrix<double, 4, 3> jq;
    const double s = sinc(a);
    const double ds = a < 1e-6 ? -1.0 / 3.0 + a * a / 10.0 : (std::cos(a) - s) / (a * a);
    jq.row(0) = (-s * v).transpose();
    jq.bottomRows<3>() = s * Eigen::Matrix3d::Identity() + ds * v * v.transpose();

    // recode quaternion rows/cols into motor rows over bivector coords:
    // rows (scalar, e12, e13, e23) = (w, -z, y, -x); columns via dv/db.
    Eigen::Matrix3d col_map = Eigen::Matrix3d::Zero();
    col_map(2, 0) = -1.0;  // dv3/db12
    col_map(1, 1) = 1.0;   // dv2/db13
    col_map(0, 2) = -1.0;  // dv1/db23
    Eigen::Matrix<double, 4, 3> motor_rows;
    motor_rows.row(0) = jq.row(0);   // scalar = w
    motor_rows.row(1) = -jq.row(3);  // e12 = -z
    motor_rows.row(2) = jq.row(2);   // e13 = y
    motor_rows.row(3) = -jq.row(1);  // e23 = -x
    const Eigen::Matrix<double, 4, 3> expected = motor_rows * col_map;

    const ExpJacobian j = exp_jacobian(b);
    const Eigen::Matrix<double, 4, 3> got = j.topLeftCorner<4, 3>();
    CHECK(oracle::max_relative_error(got, expected) <= 1e-12);
  }
}

TEST_CASE("log Jacobian at identity left-inverts the exp Jacobian at zero") {
  const LogJacobian jl = log_jacobian(Motor::identity());
  const ExpJacobian je = exp_jacobian(Bivector());
  CHECK((jl * je - Eigen::Matrix<double, 6, 6>::Identity()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("log Jacobian matches central finite differencing of the log") {
  auto rng = oracle::test_rng(33);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Motor m = motor_exp(random_bivector(rng, 0.6, 1.5));
    worst = std::max(worst,
                     oracle::max_relative_error(log_jacobian(m), fd_log_jacobian(m)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("chain identity J_log(exp B) J_exp(B) = I") {
  auto rng = oracle::test_rng(34);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Bivector b = random_bivector(rng, 0.7, 2.0);
    const Eigen::Matrix<double, 6, 6> chain = log_jacobian(motor_exp(b)) * exp_jacobian(b);
    worst = std::max(
        worst, (chain - Eigen::Matrix<double, 6, 6>::Identity()).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("log Jacobian rejects the pi branch") {
  CHECK_THROWS_AS(log_jacobian(Motor::rotor({1, 0, 0}, M_PI)), coopga::BranchError);
}
