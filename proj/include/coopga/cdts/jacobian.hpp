// Row of multivector partial derivatives with respect to the stacked joint
// vector, expandable to a real matrix over the 32 blade slots (or the 8
// motor slots for motor-valued rows).

#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <vector>

#include "coopga/cga/motor.hpp"

namespace coopga::cdts {

using cga::Motor;
using cga::Multivector;

class MultivectorJacobian {
 public:
  MultivectorJacobian() = default;
  explicit MultivectorJacobian(int n) : cols_(n) {}

  static MultivectorJacobian from_motors(const std::vector<Motor>& motors) {
    MultivectorJacobian j(static_cast<int>(motors.size()));
    for (std::size_t i = 0; i < motors.size(); ++i) j.cols_[i] = motors[i].to_multivector();
    return j;
  }

  int cols() const { return static_cast<int>(cols_.size()); }
  const Multivector& col(int i) const { return cols_[i]; }
  Multivector& col(int i) { return cols_[i]; }

  // Full 32 x N real expansion.
  Eigen::MatrixXd expand() const {
    Eigen::MatrixXd m(cga::kBladeCount, cols());
    for (int j = 0; j < cols(); ++j) {
      for (int i = 0; i < cga::kBladeCount; ++i) m(i, j) = cols_[j][i];
    }
    return m;
  }

  // 8 x N expansion over the motor slots (motor-valued rows only).
  Eigen::MatrixXd expand_motor() const {
    Eigen::MatrixXd m(8, cols());
    for (int j = 0; j < cols(); ++j) {
      for (int i = 0; i < 8; ++i) m(i, j) = cols_[j][cga::kMotorSlots[i]];
    }
    return m;
  }

  // Rows restricted to the slots set in `slot_mask`, in ascending slot order.
  Eigen::MatrixXd expand_rows(std::uint32_t slot_mask) const {
    const int rows = std::popcount(slot_mask);
    Eigen::MatrixXd m(rows, cols());
    for (int j = 0; j < cols(); ++j) {
      int r = 0;
      for (int i = 0; i < cga::kBladeCount; ++i) {
        if (slot_mask & (1u << i)) m(r++, j) = cols_[j][i];
      }
    }
    return m;
  }

  // Inverse of expand(); lossless round trip.
  static MultivectorJacobian contract(const Eigen::MatrixXd& m) {
    MultivectorJacobian j(static_cast<int>(m.cols()));
    for (int c = 0; c < m.cols(); ++c) {
      for (int i = 0; i < cga::kBladeCount; ++i) j.cols_[c][i] = m(i, c);
    }
    return j;
  }

 private:
  std::vector<Multivector> cols_;
};

// Slots carrying grade-g blades, as a 32-bit mask.
inline std::uint32_t grade_slot_mask(int g) {
  std::uint32_t mask = 0;
  for (int i = 0; i < cga::kBladeCount; ++i) {
    if (cga::slot_grade(i) == g) mask |= 1u << i;
  }
  return mask;
}

// Slots of the six bivector-logarithm coefficients.
inline std::uint32_t bivector_slot_mask() {
  return (1u << cga::kSlotE12) | (1u << cga::kSlotE13) | (1u << cga::kSlotE23) |
         (1u << cga::kSlotE1i) | (1u << cga::kSlotE2i) | (1u << cga::kSlotE3i);
}

}  // namespace coopga::cdts
