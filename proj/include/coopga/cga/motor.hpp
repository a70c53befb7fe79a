// Motors (the rigid-transform subalgebra spanned by {1, e12, e13, e23,
// e1i, e2i, e3i, e123i}) and their bivector logarithms.
//
// The exponential uses the split B = b + n with b the Euclidean rotation
// bivector and n the nilpotent translation part (n lies in the ideal
// N = {W ei}, N*N = 0), so the series terminates at first order in n:
//
//   exp(b + n) = cos a + sinc(a) b
//              + (sinc a + cos a)/2 * n + sinc(a)/2 * (n b + b n)
//              + (sinc a - cos a)/(2 a^2) * b n b,        a = |b|.
//
// The logarithm inverts the rotor part in closed form and the nilpotent
// part by solving the (linear) nilpotent block of the same expansion.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

#include "coopga/cga/multivector.hpp"
#include "coopga/cga/primitives.hpp"
#include "coopga/errors.hpp"

namespace coopga::cga {

// Multivector slots backing the 8 motor coefficients, in storage order
// (1, e12, e13, e23, e1i, e2i, e3i, e123i).
inline constexpr std::array<int, 8> kMotorSlots = {
    kSlotScalar, kSlotE12, kSlotE13, kSlotE23, kSlotE1i, kSlotE2i, kSlotE3i, kSlotE123i};

// Bivector coefficients in storage order (e12, e13, e23, e1i, e2i, e3i):
// rotation generator first (radians), translation part second (meters).
class Bivector {
 public:
  Bivector() : c_{} {}
  explicit Bivector(const std::array<double, 6>& c) : c_(c) {}
  Bivector(double e12, double e13, double e23, double e1i, double e2i, double e3i)
      : c_{e12, e13, e23, e1i, e2i, e3i} {}

  // Rotation generator of a unit axis: n* = n1 e23 - n2 e13 + n3 e12.
  static Bivector rotation_axis(const Vec3& n) {
    return Bivector(n[2], -n[1], n[0], 0.0, 0.0, 0.0);
  }
  // Generator whose exponential is the translator by t: -t^ei/2 scaled by
  // the caller; here the raw t^ei coefficients.
  static Bivector translation(const Vec3& t) {
    return Bivector(0.0, 0.0, 0.0, t[0], t[1], t[2]);
  }

  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  const std::array<double, 6>& coeffs() const { return c_; }

  Bivector operator+(const Bivector& o) const {
    Bivector r;
    for (int i = 0; i < 6; ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
  }
  Bivector operator-(const Bivector& o) const {
    Bivector r;
    for (int i = 0; i < 6; ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
  }
  Bivector operator*(double s) const {
    Bivector r;
    for (int i = 0; i < 6; ++i) r.c_[i] = c_[i] * s;
    return r;
  }
  friend Bivector operator*(double s, const Bivector& b) { return b * s; }

  double norm() const {
    double s = 0.0;
    for (double v : c_) s += v * v;
    return std::sqrt(s);
  }
  double rotation_norm() const {
    return std::sqrt(c_[0] * c_[0] + c_[1] * c_[1] + c_[2] * c_[2]);
  }

  Multivector to_multivector() const {
    Multivector x;
    x[kSlotE12] = c_[0];
    x[kSlotE13] = c_[1];
    x[kSlotE23] = c_[2];
    x[kSlotE1i] = c_[3];
    x[kSlotE2i] = c_[4];
    x[kSlotE3i] = c_[5];
    return x;
  }

 private:
  std::array<double, 6> c_;
};

namespace detail {

// Restricted 8x8 product table of the motor subalgebra, derived from the
// full Cayley table once. The subalgebra is closed; the assert guards the
// derivation.
struct MotorTable {
  struct Term {
    std::uint8_t k;
    double coeff;
  };
  std::array<std::array<std::vector<Term>, 8>, 8> terms;

  static const MotorTable& instance() {
    static const MotorTable t;
    return t;
  }

 private:
  MotorTable() {
    std::array<int, kBladeCount> slot_to_motor;
    slot_to_motor.fill(-1);
    for (int k = 0; k < 8; ++k) slot_to_motor[kMotorSlots[k]] = k;
    const CayleyTable& cayley = CayleyTable::instance();
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        for (const ProductTerm& t : cayley.geometric(kMotorSlots[i], kMotorSlots[j])) {
          const int k = slot_to_motor[t.slot];
          assert(k >= 0 && "motor subalgebra is not closed under the product");
          terms[i][j].push_back({static_cast<std::uint8_t>(k), t.coeff});
        }
      }
    }
  }
};

// Scalar kernels of the exponential, as smooth functions of x = a^2 with
// series fallbacks below kSeriesCut (relative error < 1e-15 at the cut).
inline constexpr double kSeriesCut = 1e-4;

inline double cos_sqrt(double x) { return std::cos(std::sqrt(x)); }

inline double sinc_sqrt(double x) {
  if (x < kSeriesCut) return 1.0 - x / 6.0 + x * x / 120.0;
  const double a = std::sqrt(x);
  return std::sin(a) / a;
}

// (sinc sqrt(x) - cos sqrt(x)) / x.
inline double gfun(double x) {
  if (x < kSeriesCut) return 1.0 / 3.0 - x / 30.0 + x * x / 840.0;
  return (sinc_sqrt(x) - cos_sqrt(x)) / x;
}

inline double dcos_sqrt(double x) { return -0.5 * sinc_sqrt(x); }
inline double dsinc_sqrt(double x) { return -0.5 * gfun(x); }

inline double dgfun(double x) {
  if (x < kSeriesCut) return -1.0 / 30.0 + x / 420.0 - x * x / 15120.0;
  return (0.5 * sinc_sqrt(x) - 1.5 * gfun(x)) / x;
}

// atan2(sqrt(y), s)/sqrt(y) as a smooth function of y = r^2 (s > 0 branch
// near y = 0).
inline double hfun(double y, double s) {
  if (y < kSeriesCut * s * s) {
    const double u = y / (s * s);
    return (1.0 - u / 3.0 + u * u / 5.0) / s;
  }
  const double r = std::sqrt(y);
  return std::atan2(r, s) / r;
}

inline double dhfun_dy(double y, double s) {
  if (y < kSeriesCut * s * s) {
    const double s2 = s * s;
    return (-1.0 / 3.0 + 2.0 * (y / s2) / 5.0) / (s * s2);
  }
  return (s / (s * s + y) - hfun(y, s)) / (2.0 * y);
}

inline double dhfun_ds(double y, double s) { return -1.0 / (s * s + y); }

}  // namespace detail

// Element of the even dual-quaternion subalgebra. Unit motors represent
// rigid transforms; non-unit elements appear as Jacobian columns and other
// tangent data.
class Motor {
 public:
  Motor() : c_{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0} {}
  explicit Motor(const std::array<double, 8>& c) : c_(c) {}

  static Motor identity() { return Motor(); }
  static Motor zero() {
    Motor m;
    m.c_[0] = 0.0;
    return m;
  }

  // Translator moving points by t: 1 - t^ei/2.
  static Motor translator(const Vec3& t) {
    Motor m;
    m.c_[4] = -0.5 * t[0];
    m.c_[5] = -0.5 * t[1];
    m.c_[6] = -0.5 * t[2];
    return m;
  }

  // Rotor of `angle` radians counterclockwise about the unit axis n through
  // the origin: exp(-angle/2 * n*).
  static Motor rotor(const Vec3& axis, double angle) {
    const double h = 0.5 * angle;
    const double s = std::sin(h);
    Motor m;
    m.c_[0] = std::cos(h);
    m.c_[1] = -s * axis[2];  // e12
    m.c_[2] = s * axis[1];   // e13
    m.c_[3] = -s * axis[0];  // e23
    return m;
  }

  // Rotor equivalent of the unit quaternion (w, x, y, z) acting as
  // v' = q v q*.
  static Motor from_quaternion(double w, double x, double y, double z) {
    Motor m;
    m.c_[0] = w;
    m.c_[1] = -z;
    m.c_[2] = y;
    m.c_[3] = -x;
    return m;
  }

  static Motor from_bivector(const Bivector& b) {
    Motor m = zero();
    for (int i = 0; i < 6; ++i) m.c_[i + 1] = b[i];
    return m;
  }

  static Motor from_multivector(const Multivector& x) {
    Motor m;
    for (int i = 0; i < 8; ++i) m.c_[i] = x[kMotorSlots[i]];
    return m;
  }

  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  const std::array<double, 8>& coeffs() const { return c_; }

  Multivector to_multivector() const {
    Multivector x;
    for (int i = 0; i < 8; ++i) x[kMotorSlots[i]] = c_[i];
    return x;
  }

  Motor operator*(const Motor& o) const {
    const auto& table = detail::MotorTable::instance();
    Motor r = zero();
    for (int i = 0; i < 8; ++i) {
      if (c_[i] == 0.0) continue;
      for (int j = 0; j < 8; ++j) {
        if (o.c_[j] == 0.0) continue;
        const double cij = c_[i] * o.c_[j];
        for (const auto& t : table.terms[i][j]) r.c_[t.k] += cij * t.coeff;
      }
    }
    return r;
  }

  Motor operator+(const Motor& o) const {
    Motor r = zero();
    for (int i = 0; i < 8; ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
  }
  Motor operator-(const Motor& o) const {
    Motor r = zero();
    for (int i = 0; i < 8; ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
  }
  Motor operator-() const {
    Motor r = zero();
    for (int i = 0; i < 8; ++i) r.c_[i] = -c_[i];
    return r;
  }
  Motor operator*(double s) const {
    Motor r = zero();
    for (int i = 0; i < 8; ++i) r.c_[i] = c_[i] * s;
    return r;
  }
  friend Motor operator*(double s, const Motor& m) { return m * s; }

  // Reverse: scalar and e123i keep sign, bivector blades flip.
  Motor reverse() const {
    Motor r = zero();
    r.c_[0] = c_[0];
    for (int i = 1; i < 7; ++i) r.c_[i] = -c_[i];
    r.c_[7] = c_[7];
    return r;
  }

  double norm() const {
    double s = 0.0;
    for (double v : c_) s += v * v;
    return std::sqrt(s);
  }

  // Coefficient deviation of M * ~M from 1.
  double unit_error() const {
    Motor p = *this * reverse();
    p.c_[0] -= 1.0;
    return p.norm();
  }
  bool is_unit(double tol = 1e-10) const { return unit_error() <= tol; }

  // Sandwich action M X ~M on a general multivector. Requires a unit motor;
  // tangent elements have no transform interpretation.
  Multivector sandwich(const Multivector& x) const {
    if (unit_error() > 1e-6) {
      throw NonUnitMotorError("sandwich: motor violates unit norm (deviation > 1e-6)");
    }
    const Multivector m = to_multivector();
    return m * x * m.reverse();
  }

  Vec3 act_on_point(const Vec3& x) const { return extract_point(sandwich(embed_point(x))); }

  // Rotor factor (the Euclidean-even part; unit whenever the motor is).
  Motor rotor_part() const {
    Motor r = zero();
    for (int i = 0; i < 4; ++i) r.c_[i] = c_[i];
    return r;
  }

  // Translator factor of the split M = T R with R fixing the origin and T
  // moving it to the transformed origin.
  Motor translator_part() const { return *this * rotor_part().reverse(); }

  // Translation the motor applies to the origin.
  Vec3 translation() const {
    const Motor t = translator_part();
    return Vec3{-2.0 * t.c_[4], -2.0 * t.c_[5], -2.0 * t.c_[6]};
  }

 private:
  std::array<double, 8> c_;
};

// exp of a bivector; always a unit motor.
inline Motor motor_exp(const Bivector& bv) {
  const Motor b = Motor::from_bivector(Bivector(bv[0], bv[1], bv[2], 0, 0, 0));
  const Motor n = Motor::from_bivector(Bivector(0, 0, 0, bv[3], bv[4], bv[5]));
  const double x = bv[0] * bv[0] + bv[1] * bv[1] + bv[2] * bv[2];

  const double c1 = detail::cos_sqrt(x);
  const double c2 = detail::sinc_sqrt(x);
  const double c3 = 0.5 * (c2 + c1);
  const double c4 = 0.5 * c2;
  const double c5 = 0.5 * detail::gfun(x);

  const Motor nb = n * b;
  const Motor bn = b * n;
  const Motor bnb = b * nb;

  Motor m = Motor::identity() * c1 + b * c2 + n * c3 + (nb + bn) * c4 + bnb * c5;
  return m;
}

namespace detail {

// Nilpotent block of the exponential at rotation bivector beta: the linear
// map sending translation coefficients t to the motor coefficients
// (e1i, e2i, e3i, e123i) of exp(beta + t^ei).
inline Eigen::Matrix<double, 4, 3> exp_nilpotent_matrix(const Bivector& beta) {
  const double x = beta.rotation_norm() * beta.rotation_norm();
  const double c3 = 0.5 * (sinc_sqrt(x) + cos_sqrt(x));
  const double c4 = 0.5 * sinc_sqrt(x);
  const double c5 = 0.5 * gfun(x);
  const Motor b = Motor::from_bivector(beta);
  Eigen::Matrix<double, 4, 3> L;
  for (int j = 0; j < 3; ++j) {
    Motor e = Motor::zero();
    e[4 + j] = 1.0;
    const Motor col = e * c3 + (e * b + b * e) * c4 + (b * e * b) * c5;
    for (int i = 0; i < 4; ++i) L(i, j) = col[4 + i];
  }
  return L;
}

}  // namespace detail

// Principal logarithm. The motor sign is canonicalized first (M and -M act
// identically), so the recovered rotation angle is the geodesic one in
// [0, pi). Throws BranchError within 1e-9 rad of the pi branch cut.
inline Bivector motor_log(const Motor& motor, double unit_tol = 1e-6) {
  if (motor.unit_error() > unit_tol) {
    throw NonUnitMotorError("motor_log: motor violates unit norm");
  }
  const Motor m = (motor[0] < 0.0) ? -motor : motor;

  const double s = m[0];
  const double y = m[1] * m[1] + m[2] * m[2] + m[3] * m[3];
  const double angle = 2.0 * std::atan2(std::sqrt(y), s);
  constexpr double kBranchTol = 1e-9;
  if (angle >= M_PI - kBranchTol) {
    throw BranchError("motor_log: rotation angle within tolerance of pi");
  }

  const double h = detail::hfun(y, s);
  const Bivector beta(h * m[1], h * m[2], h * m[3], 0, 0, 0);

  const Eigen::Matrix<double, 4, 3> L = detail::exp_nilpotent_matrix(beta);
  Eigen::Vector4d nbar(m[4], m[5], m[6], m[7]);
  const Eigen::Vector3d t = L.colPivHouseholderQr().solve(nbar);

  return Bivector(beta[0], beta[1], beta[2], t(0), t(1), t(2));
}

}  // namespace coopga::cga
