// Serial revolute chains: per-joint motors, forward kinematics as a motor
// product, and the analytic motor Jacobian.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "coopga/cga/motor.hpp"
#include "coopga/errors.hpp"

namespace coopga::kin {

using cga::Bivector;
using cga::Motor;
using cga::Vec3;

struct JointDescription {
  Bivector axis;      // rotation generator, unit rotational magnitude
  Motor offset;       // fixed transform to the next joint frame
  double limit_min = -M_PI;
  double limit_max = M_PI;
};

// Generator bivector of a revolute axis with unit direction n through point
// p: the origin-axis generator transported by the translator to p.
inline Bivector revolute_axis(const Vec3& direction, const Vec3& point) {
  const double n2 = direction[0] * direction[0] + direction[1] * direction[1] +
                    direction[2] * direction[2];
  if (std::abs(n2 - 1.0) > 1e-6) {
    throw ConfigError("revolute_axis: direction must be a unit vector");
  }
  const cga::Multivector nstar = Bivector::rotation_axis(direction).to_multivector();
  const cga::Multivector t = Motor::translator(point).to_multivector();
  const cga::Multivector moved = t * nstar * t.reverse();
  return Bivector(moved[cga::kSlotE12], moved[cga::kSlotE13], moved[cga::kSlotE23],
                  moved[cga::kSlotE1i], moved[cga::kSlotE2i], moved[cga::kSlotE3i]);
}

class KinematicChain {
 public:
  KinematicChain(std::vector<JointDescription> joints, Motor base = Motor::identity(),
                 std::string name = "")
      : joints_(std::move(joints)), base_(base), name_(std::move(name)) {
    if (joints_.empty()) throw ConfigError("KinematicChain: at least one joint required");
    for (std::size_t i = 0; i < joints_.size(); ++i) {
      const JointDescription& j = joints_[i];
      if (std::abs(j.axis.rotation_norm() - 1.0) > 1e-6) {
        throw ConfigError("KinematicChain: joint " + std::to_string(i) +
                          " axis has non-unit rotational magnitude");
      }
      if (!j.offset.is_unit(1e-8)) {
        throw ConfigError("KinematicChain: joint " + std::to_string(i) +
                          " offset motor is not unit");
      }
      if (j.limit_min > j.limit_max) {
        throw ConfigError("KinematicChain: joint " + std::to_string(i) +
                          " has limit_min > limit_max");
      }
    }
    if (!base_.is_unit(1e-8)) throw ConfigError("KinematicChain: base motor is not unit");
  }

  int dof() const { return static_cast<int>(joints_.size()); }
  const std::vector<JointDescription>& joints() const { return joints_; }
  const Motor& base() const { return base_; }
  const std::string& name() const { return name_; }

  // Chain with the base motor replaced (placement of the same robot).
  KinematicChain with_base(const Motor& base) const {
    return KinematicChain(joints_, base, name_);
  }

  // M_i(q) = exp(-q/2 * axis) * offset. Out-of-limit q still evaluates;
  // limits are a solver concern.
  Motor joint_motor(int i, double q) const {
    return cga::motor_exp(joints_[i].axis * (-0.5 * q)) * joints_[i].offset;
  }

  Motor forward(const Eigen::VectorXd& q) const {
    check_dim(q);
    Motor m = base_;
    for (int i = 0; i < dof(); ++i) m = m * joint_motor(i, q(i));
    return m;
  }

  // Columns dM/dq_i of the forward kinematics motor, Eq.-(5)-style: each
  // column is prefix * (-axis/2) * joint motor * suffix.
  std::vector<Motor> motor_jacobian(const Eigen::VectorXd& q) const {
    return forward_with_jacobian(q).second;
  }

  std::pair<Motor, std::vector<Motor>> forward_with_jacobian(const Eigen::VectorXd& q) const {
    check_dim(q);
    const int n = dof();
    std::vector<Motor> joint(n);
    for (int i = 0; i < n; ++i) joint[i] = joint_motor(i, q(i));

    std::vector<Motor> prefix(n + 1);
    prefix[0] = base_;
    for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * joint[i];

    std::vector<Motor> suffix(n + 1);
    suffix[n] = Motor::identity();
    for (int i = n - 1; i >= 0; --i) suffix[i] = joint[i] * suffix[i + 1];

    std::vector<Motor> jac(n);
    for (int i = 0; i < n; ++i) {
      const Motor gen = Motor::from_bivector(joints_[i].axis * -0.5);
      jac[i] = prefix[i] * gen * joint[i] * suffix[i + 1];
    }
    return {prefix[n], jac};
  }

  bool within_limits(const Eigen::VectorXd& q) const {
    check_dim(q);
    for (int i = 0; i < dof(); ++i) {
      if (q(i) < joints_[i].limit_min || q(i) > joints_[i].limit_max) return false;
    }
    return true;
  }

  Eigen::VectorXd clamp_to_limits(const Eigen::VectorXd& q) const {
    check_dim(q);
    Eigen::VectorXd out = q;
    for (int i = 0; i < dof(); ++i) {
      out(i) = std::clamp(q(i), joints_[i].limit_min, joints_[i].limit_max);
    }
    return out;
  }

 private:
  void check_dim(const Eigen::VectorXd& q) const {
    if (q.size() != dof()) {
      throw DimensionError("KinematicChain: joint vector has size " +
                           std::to_string(q.size()) + ", chain has " + std::to_string(dof()) +
                           " joints");
    }
  }

  std::vector<JointDescription> joints_;
  Motor base_;
  std::string name_;
};

}  // namespace coopga::kin
