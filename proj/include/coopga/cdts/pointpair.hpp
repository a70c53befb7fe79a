// Cooperative pointpair P_cdts = P_1 ^ P_2 of both end-effector points and
// its Jacobian (product rule through both sandwiches).

#pragma once

#include <vector>

#include "coopga/cdts/jacobian.hpp"
#include "coopga/cdts/state.hpp"

namespace coopga::cdts {

// Columns of d/dq [M X0 ~M] for a fixed multivector X0 carried by motor m
// with motor-Jacobian columns jm: each column is J X0 ~M + M X0 ~J.
inline std::vector<Multivector> sandwich_jacobian(const Motor& m, const std::vector<Motor>& jm,
                                                  const Multivector& x0) {
  const Multivector mv = m.to_multivector();
  const Multivector mv_rev = mv.reverse();
  std::vector<Multivector> cols(jm.size());
  for (std::size_t j = 0; j < jm.size(); ++j) {
    const Multivector jj = jm[j].to_multivector();
    cols[j] = jj * x0 * mv_rev + mv * x0 * jj.reverse();
  }
  return cols;
}

inline Multivector cooperative_pointpair(const CdtsState& s) {
  return s.ee_point(1).outer(s.ee_point(2));
}

// [J_{P1} ^ P2 | P1 ^ J_{P2}] over the stacked joint vector. Rank-deficient
// exactly when the end-effector points coincide (the pair degenerates).
inline MultivectorJacobian cooperative_pointpair_jacobian(const CdtsState& s) {
  const Multivector p1 = s.ee_point(1);
  const Multivector p2 = s.ee_point(2);
  const std::vector<Multivector> dp1 =
      sandwich_jacobian(s.motor1(), s.jacobian1(), Multivector::e0());
  const std::vector<Multivector> dp2 =
      sandwich_jacobian(s.motor2(), s.jacobian2(), Multivector::e0());

  MultivectorJacobian jac(s.dof());
  for (int j = 0; j < s.dof1(); ++j) jac.col(j) = dp1[j].outer(p2);
  for (int j = 0; j < s.dof2(); ++j) jac.col(s.dof1() + j) = p1.outer(dp2[j]);
  return jac;
}

}  // namespace coopga::cdts
