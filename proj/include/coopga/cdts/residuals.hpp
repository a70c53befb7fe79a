// Residual multivectors of the cooperative dual-task space: each couples a
// task error that vanishes exactly when the geometric condition holds with
// its analytic Jacobian over the stacked joint vector. Residuals are the
// uniform currency consumed by the solvers.

#pragma once

#include <cstdint>
#include <bit>
#include <vector>

#include "coopga/cdts/motors.hpp"
#include "coopga/cdts/pointpair.hpp"

namespace coopga::cdts {

enum class Frame { kRelative, kAbsolute };

struct Residual {
  Multivector value;
  MultivectorJacobian jacobian;
  std::uint32_t slot_mask = 0xffffffffu;  // slots the value can structurally populate

  int rows() const { return std::popcount(slot_mask); }

  Eigen::VectorXd value_vector() const {
    Eigen::VectorXd v(rows());
    int r = 0;
    for (int i = 0; i < cga::kBladeCount; ++i) {
      if (slot_mask & (1u << i)) v(r++) = value[i];
    }
    return v;
  }
  Eigen::MatrixXd jacobian_matrix() const { return jacobian.expand_rows(slot_mask); }

  double norm() const { return value_vector().norm(); }
};

namespace detail {

inline Motor frame_motor(const CdtsState& s, Frame f) {
  return f == Frame::kRelative ? relative_motor(s) : absolute_motor(s);
}

inline std::vector<Motor> frame_jacobian(const CdtsState& s, Frame f) {
  return f == Frame::kRelative ? relative_jacobian(s) : absolute_jacobian(s);
}

// Dominant grade of a homogeneous primitive; throws when mixed-grade input
// would make the residual's grade mask ill-defined.
inline int primitive_grade(const Multivector& x, const char* what) {
  const int g = x.dominant_grade(1e-12 * (1.0 + x.max_abs()));
  if (g < 0) throw Error(std::string(what) + ": zero primitive");
  const double off = (x - x.grade(g)).norm();
  if (off > 1e-9 * x.norm()) {
    throw Error(std::string(what) + ": primitive is not of homogeneous grade");
  }
  return g;
}

}  // namespace detail

// E = log(~M_target M(q1, q2)); zero iff the chosen frame motor reaches the
// target. Bivector-valued, Jacobian chained through the logarithm map.
inline Residual residual_target_motor(const CdtsState& s, const Motor& target, Frame frame) {
  const Motor m = detail::frame_motor(s, frame);
  const std::vector<Motor> jm = detail::frame_jacobian(s, frame);
  const Motor rel = target.reverse() * m;
  const cga::Bivector value = cga::motor_log(rel);
  const cga::LogJacobian jlog = cga::log_jacobian(rel);

  Eigen::MatrixXd dm(8, s.dof());
  const Motor tr = target.reverse();
  for (int j = 0; j < s.dof(); ++j) {
    const Motor col = tr * jm[j];
    for (int i = 0; i < 8; ++i) dm(i, j) = col[i];
  }
  const Eigen::MatrixXd jac = jlog * dm;  // 6 x dof

  Residual r;
  r.value = value.to_multivector();
  r.jacobian = MultivectorJacobian(s.dof());
  static constexpr std::array<int, 6> kBivectorSlots = {cga::kSlotE12, cga::kSlotE13,
                                                        cga::kSlotE23, cga::kSlotE1i,
                                                        cga::kSlotE2i, cga::kSlotE3i};
  for (int j = 0; j < s.dof(); ++j) {
    for (int i = 0; i < 6; ++i) r.jacobian.col(j)[kBivectorSlots[i]] = jac(i, j);
  }
  r.slot_mask = bivector_slot_mask();
  return r;
}

// E = X_d ^ (M X ~M) for a primitive X carried in the chosen frame; zero on
// incidence with the target primitive X_d.
inline Residual residual_reach_primitive(const CdtsState& s, const Multivector& target,
                                         const Multivector& carried, Frame frame) {
  const Motor m = detail::frame_motor(s, frame);
  const std::vector<Motor> jm = detail::frame_jacobian(s, frame);
  const Multivector moved = m.to_multivector() * carried * m.to_multivector().reverse();
  const std::vector<Multivector> dmoved = sandwich_jacobian(m, jm, carried);

  Residual r;
  r.value = target.outer(moved);
  r.jacobian = MultivectorJacobian(s.dof());
  for (int j = 0; j < s.dof(); ++j) r.jacobian.col(j) = target.outer(dmoved[j]);
  const int g = detail::primitive_grade(target, "residual_reach_primitive target") +
                detail::primitive_grade(carried, "residual_reach_primitive carried");
  r.slot_mask = g <= 5 ? grade_slot_mask(g) : 0u;
  if (r.slot_mask == 0) {
    throw Error("residual_reach_primitive: target and carried grades wedge to zero");
  }
  return r;
}

// E = P_target ^ P_cdts; grade 3, zero iff the target point coincides with
// either end-effector point.
inline Residual residual_pointpair_point(const CdtsState& s, const Multivector& p_target) {
  Residual r;
  r.value = p_target.outer(cooperative_pointpair(s));
  const MultivectorJacobian jpp = cooperative_pointpair_jacobian(s);
  r.jacobian = MultivectorJacobian(s.dof());
  for (int j = 0; j < s.dof(); ++j) r.jacobian.col(j) = p_target.outer(jpp.col(j));
  r.slot_mask = grade_slot_mask(3);
  return r;
}

// E = X_d x P_cdts (commutator); zero iff both end-effector points lie on
// the round/flat X_d.
inline Residual residual_containment(const CdtsState& s, const Multivector& primitive) {
  const int g = detail::primitive_grade(primitive, "residual_containment primitive");
  Residual r;
  r.value = primitive.commutator(cooperative_pointpair(s));
  const MultivectorJacobian jpp = cooperative_pointpair_jacobian(s);
  r.jacobian = MultivectorJacobian(s.dof());
  for (int j = 0; j < s.dof(); ++j) r.jacobian.col(j) = primitive.commutator(jpp.col(j));
  r.slot_mask = cga::CayleyTable::instance().commutator_slot_mask(g, 2);
  return r;
}

// Scalar E = -2 P_1|P_2 - d^2 = |x_1 - x_2|^2 - d^2.
inline Residual residual_distance(const CdtsState& s, double distance) {
  if (distance < 0.0) throw Error("residual_distance: negative target distance");
  const Multivector p1 = s.ee_point(1);
  const Multivector p2 = s.ee_point(2);
  const std::vector<Multivector> dp1 =
      sandwich_jacobian(s.motor1(), s.jacobian1(), Multivector::e0());
  const std::vector<Multivector> dp2 =
      sandwich_jacobian(s.motor2(), s.jacobian2(), Multivector::e0());

  Residual r;
  r.value = Multivector::scalar(-2.0 * p1.inner(p2).scalar_part() - distance * distance);
  r.jacobian = MultivectorJacobian(s.dof());
  for (int j = 0; j < s.dof1(); ++j) {
    r.jacobian.col(j) = Multivector::scalar(-2.0 * dp1[j].inner(p2).scalar_part());
  }
  for (int j = 0; j < s.dof2(); ++j) {
    r.jacobian.col(s.dof1() + j) = Multivector::scalar(-2.0 * p1.inner(dp2[j]).scalar_part());
  }
  r.slot_mask = 1u << cga::kSlotScalar;
  return r;
}

// E = (M_1 L_1 ~M_1) x (M_2 L_2 ~M_2); zero iff the transformed lines are
// collinear. Lines are expected unit-normalized (normalize_line).
inline Residual residual_line_alignment(const CdtsState& s, const Multivector& line1,
                                        const Multivector& line2) {
  const Multivector a = s.motor1().sandwich(line1);
  const Multivector b = s.motor2().sandwich(line2);
  const std::vector<Multivector> da = sandwich_jacobian(s.motor1(), s.jacobian1(), line1);
  const std::vector<Multivector> db = sandwich_jacobian(s.motor2(), s.jacobian2(), line2);

  Residual r;
  r.value = a.commutator(b);
  r.jacobian = MultivectorJacobian(s.dof());
  for (int j = 0; j < s.dof1(); ++j) r.jacobian.col(j) = da[j].commutator(b);
  for (int j = 0; j < s.dof2(); ++j) r.jacobian.col(s.dof1() + j) = a.commutator(db[j]);
  r.slot_mask = cga::CayleyTable::instance().commutator_slot_mask(3, 3);
  return r;
}

// E = (T_a L ~T_a) x (M_a L ~M_a) with T_a the translator factor of the
// absolute motor; zero iff the absolute rotation leaves the line L
// invariant (orientation constraint about the axis L).
inline Residual residual_absolute_axis(const CdtsState& s, const Multivector& line) {
  const Motor ma = absolute_motor(s);
  const std::vector<Motor> jma = absolute_jacobian(s);
  const Motor rotor = ma.rotor_part();
  const Motor ta = ma * rotor.reverse();

  const Multivector ta_mv = ta.to_multivector();
  const Multivector ma_mv = ma.to_multivector();
  const Multivector a = ta_mv * line * ta_mv.reverse();
  const Multivector b = ma_mv * line * ma_mv.reverse();

  Residual r;
  r.value = a.commutator(b);
  r.jacobian = MultivectorJacobian(s.dof());
  for (int j = 0; j < s.dof(); ++j) {
    const Motor dma = jma[j];
    // d T_a = dM_a ~R_a + M_a d~R_a, with R_a the Euclidean-even projection.
    const Motor dta = dma * rotor.reverse() + ma * dma.rotor_part().reverse();
    const Multivector dta_mv = dta.to_multivector();
    const Multivector dma_mv = dma.to_multivector();
    const Multivector da = dta_mv * line * ta_mv.reverse() + ta_mv * line * dta_mv.reverse();
    const Multivector db = dma_mv * line * ma_mv.reverse() + ma_mv * line * dma_mv.reverse();
    r.jacobian.col(j) = da.commutator(b) + a.commutator(db);
  }
  r.slot_mask = cga::CayleyTable::instance().commutator_slot_mask(3, 3);
  return r;
}

// Stacked single-arm variant of primitive reaching: E = X_d ^ P_arm. Used
// to contrast stacked point objectives with the cooperative pointpair.
inline Residual residual_point_on_primitive(const CdtsState& s, const Multivector& target,
                                            int arm) {
  const Multivector p = s.ee_point(arm);
  const std::vector<Multivector> dp =
      arm == 1 ? sandwich_jacobian(s.motor1(), s.jacobian1(), Multivector::e0())
               : sandwich_jacobian(s.motor2(), s.jacobian2(), Multivector::e0());

  Residual r;
  r.value = target.outer(p);
  r.jacobian = MultivectorJacobian(s.dof());
  const int base = arm == 1 ? 0 : s.dof1();
  for (std::size_t j = 0; j < dp.size(); ++j) {
    r.jacobian.col(base + static_cast<int>(j)) = target.outer(dp[j]);
  }
  const int g = detail::primitive_grade(target, "residual_point_on_primitive target") + 1;
  r.slot_mask = g <= 5 ? grade_slot_mask(g) : 0u;
  if (r.slot_mask == 0) {
    throw Error("residual_point_on_primitive: grade-5 target cannot wedge a point");
  }
  return r;
}

}  // namespace coopga::cdts
