// Joint configuration of a dual-arm system together with the cached forward
// kinematics and per-arm motor Jacobians both task-space constructions
// consume.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "coopga/cga/primitives.hpp"
#include "coopga/kin/dual_arm.hpp"

namespace coopga::cdts {

using cga::Motor;
using cga::Multivector;
using cga::Vec3;
using kin::DualArmSystem;

class CdtsState {
 public:
  CdtsState(const DualArmSystem& system, Eigen::VectorXd q1, Eigen::VectorXd q2)
      : system_(&system) {
    update(std::move(q1), std::move(q2));
  }

  static CdtsState from_stacked(const DualArmSystem& system, const Eigen::VectorXd& q) {
    auto [q1, q2] = system.split(q);
    return CdtsState(system, q1, q2);
  }

  // Recomputes the cached kinematics; the caches are never stale.
  void update(Eigen::VectorXd q1, Eigen::VectorXd q2) {
    q1_ = std::move(q1);
    q2_ = std::move(q2);
    std::tie(m1_, j1_) = system_->arm1().forward_with_jacobian(q1_);
    std::tie(m2_, j2_) = system_->arm2().forward_with_jacobian(q2_);
  }
  void update_stacked(const Eigen::VectorXd& q) {
    auto [q1, q2] = system_->split(q);
    update(q1, q2);
  }

  const DualArmSystem& system() const { return *system_; }
  const Eigen::VectorXd& q1() const { return q1_; }
  const Eigen::VectorXd& q2() const { return q2_; }
  Eigen::VectorXd stacked() const {
    Eigen::VectorXd q(dof());
    q << q1_, q2_;
    return q;
  }

  int dof1() const { return static_cast<int>(q1_.size()); }
  int dof2() const { return static_cast<int>(q2_.size()); }
  int dof() const { return dof1() + dof2(); }

  const Motor& motor1() const { return m1_; }
  const Motor& motor2() const { return m2_; }
  const std::vector<Motor>& jacobian1() const { return j1_; }
  const std::vector<Motor>& jacobian2() const { return j2_; }

  // End-effector point M e0 ~M of arm 1 or 2.
  Multivector ee_point(int arm) const {
    const Motor& m = (arm == 1) ? m1_ : m2_;
    const Multivector mv = m.to_multivector();
    return mv * Multivector::e0() * mv.reverse();
  }
  Vec3 ee_position(int arm) const { return cga::extract_point(ee_point(arm)); }

  // Euclidean end-effector separation, via the inner-product identity.
  double ee_separation() const {
    const double d2 = cga::squared_distance(ee_point(1), ee_point(2));
    return d2 > 0.0 ? std::sqrt(d2) : 0.0;
  }

 private:
  const DualArmSystem* system_;
  Eigen::VectorXd q1_, q2_;
  Motor m1_, m2_;
  std::vector<Motor> j1_, j2_;
};

}  // namespace coopga::cdts
