// Dense multivector over the 32 null-basis blades, with the four products
// of the algebra, grade machinery and the reverse involution. All values are
// immutable-by-convention plain data; every operation is a pure function.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "coopga/cga/blades.hpp"
#include "coopga/cga/cayley.hpp"

namespace coopga::cga {

class Multivector {
 public:
  using Coeffs = std::array<double, kBladeCount>;

  Multivector() : c_{} {}
  explicit Multivector(const Coeffs& coeffs) : c_(coeffs) {}

  static Multivector scalar(double value) {
    Multivector x;
    x.c_[kSlotScalar] = value;
    return x;
  }
  static Multivector basis(int slot, double value = 1.0) {
    Multivector x;
    x.c_[slot] = value;
    return x;
  }
  static Multivector e1() { return basis(kSlotE1); }
  static Multivector e2() { return basis(kSlotE2); }
  static Multivector e3() { return basis(kSlotE3); }
  static Multivector e0() { return basis(kSlotE0); }
  static Multivector ei() { return basis(kSlotEi); }

  double operator[](int slot) const { return c_[slot]; }
  double& operator[](int slot) { return c_[slot]; }
  const Coeffs& coeffs() const { return c_; }

  Multivector operator+(const Multivector& o) const {
    Multivector r;
    for (int i = 0; i < kBladeCount; ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
  }
  Multivector operator-(const Multivector& o) const {
    Multivector r;
    for (int i = 0; i < kBladeCount; ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
  }
  Multivector operator-() const {
    Multivector r;
    for (int i = 0; i < kBladeCount; ++i) r.c_[i] = -c_[i];
    return r;
  }
  Multivector operator*(double s) const {
    Multivector r;
    for (int i = 0; i < kBladeCount; ++i) r.c_[i] = c_[i] * s;
    return r;
  }
  friend Multivector operator*(double s, const Multivector& x) { return x * s; }
  Multivector operator/(double s) const { return *this * (1.0 / s); }
  Multivector& operator+=(const Multivector& o) {
    for (int i = 0; i < kBladeCount; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    for (int i = 0; i < kBladeCount; ++i) c_[i] -= o.c_[i];
    return *this;
  }

  // Geometric product.
  Multivector operator*(const Multivector& o) const {
    return apply_table(o, &CayleyTable::geometric);
  }
  // Outer (wedge) product.
  Multivector outer(const Multivector& o) const { return apply_table(o, &CayleyTable::outer); }
  // Inner product: the grade |r-s| part of the blade-wise geometric product,
  // extended bilinearly (see docs/conventions.md).
  Multivector inner(const Multivector& o) const { return apply_table(o, &CayleyTable::inner); }
  // Commutator product (this*o - o*this)/2.
  Multivector commutator(const Multivector& o) const {
    return apply_table(o, &CayleyTable::commutator);
  }

  // Grade-wise reverse involution.
  Multivector reverse() const {
    Multivector r;
    for (int i = 0; i < kBladeCount; ++i) r.c_[i] = reverse_sign(slot_grade(i)) * c_[i];
    return r;
  }

  // Grade-k part.
  Multivector grade(int k) const {
    Multivector r;
    for (int i = 0; i < kBladeCount; ++i) {
      if (slot_grade(i) == k) r.c_[i] = c_[i];
    }
    return r;
  }

  double scalar_part() const { return c_[kSlotScalar]; }

  // Euclidean norm of the coefficient vector.
  double norm() const {
    double s = 0.0;
    for (double v : c_) s += v * v;
    return std::sqrt(s);
  }
  double norm_sq() const {
    double s = 0.0;
    for (double v : c_) s += v * v;
    return s;
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  bool is_zero(double tol = 0.0) const { return max_abs() <= tol; }

  // Highest grade with a coefficient above tol, or -1 for (numerically) zero.
  int dominant_grade(double tol = 1e-12) const {
    int g = -1;
    for (int i = 0; i < kBladeCount; ++i) {
      if (std::abs(c_[i]) > tol) g = std::max(g, slot_grade(i));
    }
    return g;
  }

  std::string to_string(double tol = 1e-12) const {
    std::string out;
    for (int i = 0; i < kBladeCount; ++i) {
      if (std::abs(c_[i]) <= tol) continue;
      if (!out.empty()) out += " + ";
      out += std::to_string(c_[i]) + "*" + blade_name(i);
    }
    return out.empty() ? "0" : out;
  }

 private:
  using TableAccessor = const std::vector<ProductTerm>& (CayleyTable::*)(int, int) const;

  Multivector apply_table(const Multivector& o, TableAccessor accessor) const {
    const CayleyTable& table = CayleyTable::instance();
    Multivector r;
    for (int i = 0; i < kBladeCount; ++i) {
      if (c_[i] == 0.0) continue;
      for (int j = 0; j < kBladeCount; ++j) {
        if (o.c_[j] == 0.0) continue;
        const double cij = c_[i] * o.c_[j];
        for (const ProductTerm& t : (table.*accessor)(i, j)) {
          r.c_[t.slot] += cij * t.coeff;
        }
      }
    }
    return r;
  }

  Coeffs c_;
};

}  // namespace coopga::cga
