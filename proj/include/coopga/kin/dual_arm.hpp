// Two serial chains forming one dual-arm system.

#pragma once

#include <utility>

#include "coopga/kin/chain.hpp"

namespace coopga::kin {

class DualArmSystem {
 public:
  DualArmSystem(KinematicChain arm1, KinematicChain arm2)
      : arm1_(std::move(arm1)), arm2_(std::move(arm2)) {
    if ((arm1_.base() - arm2_.base()).norm() < 1e-12) {
      throw ConfigError("DualArmSystem: the two base poses must differ");
    }
  }

  const KinematicChain& arm1() const { return arm1_; }
  const KinematicChain& arm2() const { return arm2_; }
  int dof1() const { return arm1_.dof(); }
  int dof2() const { return arm2_.dof(); }
  int dof() const { return arm1_.dof() + arm2_.dof(); }

  std::pair<Eigen::VectorXd, Eigen::VectorXd> split(const Eigen::VectorXd& q) const {
    if (q.size() != dof()) {
      throw DimensionError("DualArmSystem: stacked joint vector has wrong size");
    }
    return {q.head(dof1()), q.tail(dof2())};
  }

 private:
  KinematicChain arm1_;
  KinematicChain arm2_;
};

}  // namespace coopga::kin
