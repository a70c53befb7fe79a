// Relative and absolute motors of the cooperative dual-task space and their
// analytic Jacobians over the stacked joint vector.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "coopga/cga/motor_jacobians.hpp"
#include "coopga/cdts/jacobian.hpp"
#include "coopga/cdts/state.hpp"

namespace coopga::cdts {

using cga::Bivector;

// M_r = ~M_2 M_1: arm 1's end-effector pose expressed in arm 2's
// end-effector frame.
inline Motor relative_motor(const CdtsState& s) {
  return s.motor2().reverse() * s.motor1();
}

// Columns [~M_2 J_1 | ~J_2 M_1] over (q1, q2).
inline std::vector<Motor> relative_jacobian(const CdtsState& s) {
  std::vector<Motor> cols(s.dof());
  const Motor m2r = s.motor2().reverse();
  for (int j = 0; j < s.dof1(); ++j) cols[j] = m2r * s.jacobian1()[j];
  for (int j = 0; j < s.dof2(); ++j) {
    cols[s.dof1() + j] = s.jacobian2()[j].reverse() * s.motor1();
  }
  return cols;
}

// M_a = M_2 exp(log(M_r)/2): the motor midway between the two end-effector
// poses. Inherits the principal-branch restriction of the logarithm.
inline Motor absolute_motor(const CdtsState& s) {
  const Motor mr = relative_motor(s);
  return s.motor2() * cga::motor_exp(cga::motor_log(mr) * 0.5);
}

// d M_a / d(q1, q2) = M_2 J_{M_{r/2}} + [0 | J_2 M_{r/2}], with the half
// motor's Jacobian chained through the exp and log maps:
// J_{M_{r/2}} = J_exp(B_{r/2}) * 1/2 * J_log(M_r) * J_r.
inline std::vector<Motor> absolute_jacobian(const CdtsState& s) {
  const Motor mr = relative_motor(s);
  const Bivector br2 = cga::motor_log(mr) * 0.5;
  const Motor mr2 = cga::motor_exp(br2);

  const std::vector<Motor> jr = relative_jacobian(s);
  Eigen::MatrixXd jr_mat(8, s.dof());
  for (int j = 0; j < s.dof(); ++j) {
    for (int i = 0; i < 8; ++i) jr_mat(i, j) = jr[j][i];
  }
  const Eigen::MatrixXd jhalf =
      cga::exp_jacobian(br2) * (0.5 * cga::log_jacobian(mr)) * jr_mat;

  std::vector<Motor> cols(s.dof());
  for (int j = 0; j < s.dof(); ++j) {
    Motor c = Motor::zero();
    for (int i = 0; i < 8; ++i) c[i] = jhalf(i, j);
    cols[j] = s.motor2() * c;
  }
  for (int j = 0; j < s.dof2(); ++j) {
    cols[s.dof1() + j] = cols[s.dof1() + j] + s.jacobian2()[j] * mr2;
  }
  return cols;
}

}  // namespace coopga::cdts
