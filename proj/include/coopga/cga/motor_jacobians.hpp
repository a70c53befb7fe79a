// Analytic Jacobians of the motor exponential and logarithm, obtained by
// differentiating the terminating-series closed forms in motor.hpp. The
// scalar kernels are smooth functions of the squared rotation magnitude, so
// no direction singularities appear at small angles.

#pragma once

#include <Eigen/Dense>

#include "coopga/cga/motor.hpp"

namespace coopga::cga {

using ExpJacobian = Eigen::Matrix<double, 8, 6>;  // motor coeffs by bivector coeffs
using LogJacobian = Eigen::Matrix<double, 6, 8>;  // bivector coeffs by motor coeffs

// d exp(B) / dB. Columns follow the bivector order (e12, e13, e23, e1i,
// e2i, e3i); rows the motor order.
inline ExpJacobian exp_jacobian(const Bivector& bv) {
  const Motor b = Motor::from_bivector(Bivector(bv[0], bv[1], bv[2], 0, 0, 0));
  const Motor n = Motor::from_bivector(Bivector(0, 0, 0, bv[3], bv[4], bv[5]));
  const double x = bv[0] * bv[0] + bv[1] * bv[1] + bv[2] * bv[2];

  const double c1 = detail::cos_sqrt(x);
  const double c2 = detail::sinc_sqrt(x);
  const double c3 = 0.5 * (c2 + c1);
  const double c4 = 0.5 * c2;
  const double c5 = 0.5 * detail::gfun(x);
  const double d1 = detail::dcos_sqrt(x);
  const double d2 = detail::dsinc_sqrt(x);
  const double d3 = 0.5 * (d2 + d1);
  const double d4 = 0.5 * d2;
  const double d5 = 0.5 * detail::dgfun(x);

  const Motor nb = n * b;
  const Motor bn = b * n;
  const Motor bnb = b * nb;
  // Kernel-derivative combination shared by the three rotation columns.
  const Motor dkernel =
      Motor::identity() * d1 + b * d2 + n * d3 + (nb + bn) * d4 + bnb * d5;

  ExpJacobian jac;
  for (int j = 0; j < 3; ++j) {
    Motor ej = Motor::zero();
    ej[1 + j] = 1.0;
    const Motor col = dkernel * (2.0 * bv[j]) + ej * c2 + (n * ej + ej * n) * c4 +
                      (ej * nb + bn * ej) * c5;
    for (int i = 0; i < 8; ++i) jac(i, j) = col[i];
  }
  for (int k = 0; k < 3; ++k) {
    Motor ek = Motor::zero();
    ek[4 + k] = 1.0;
    const Motor col = ek * c3 + (ek * b + b * ek) * c4 + (b * ek * b) * c5;
    for (int i = 0; i < 8; ++i) jac(i, 3 + k) = col[i];
  }
  return jac;
}

namespace detail {

// Directional derivative of the nilpotent block L(beta) along the rotation
// bivector perturbation dbeta.
inline Eigen::Matrix<double, 4, 3> exp_nilpotent_matrix_deriv(const Bivector& beta,
                                                              const Bivector& dbeta) {
  const double x =
      beta[0] * beta[0] + beta[1] * beta[1] + beta[2] * beta[2];
  const double dx = 2.0 * (beta[0] * dbeta[0] + beta[1] * dbeta[1] + beta[2] * dbeta[2]);
  const double c4 = 0.5 * sinc_sqrt(x);
  const double c5 = 0.5 * gfun(x);
  const double d3 = 0.5 * (dsinc_sqrt(x) + dcos_sqrt(x));
  const double d4 = 0.5 * dsinc_sqrt(x);
  const double d5 = 0.5 * dgfun(x);
  const Motor b = Motor::from_bivector(beta);
  const Motor db = Motor::from_bivector(Bivector(dbeta[0], dbeta[1], dbeta[2], 0, 0, 0));
  Eigen::Matrix<double, 4, 3> dL;
  for (int j = 0; j < 3; ++j) {
    Motor e = Motor::zero();
    e[4 + j] = 1.0;
    const Motor col = (e * d3 + (e * b + b * e) * d4 + (b * e * b) * d5) * dx +
                      (e * db + db * e) * c4 + (db * e * b + b * e * db) * c5;
    for (int i = 0; i < 4; ++i) dL(i, j) = col[4 + i];
  }
  return dL;
}

}  // namespace detail

// d log(M) / dM at a unit motor, as the derivative of the implemented
// principal logarithm (smoothly extended off the unit manifold by the
// algorithm itself). Satisfies log_jacobian(exp B) * exp_jacobian(B) = I6.
inline LogJacobian log_jacobian(const Motor& motor, double unit_tol = 1e-6) {
  if (motor.unit_error() > unit_tol) {
    throw NonUnitMotorError("log_jacobian: motor violates unit norm");
  }
  const bool flipped = motor[0] < 0.0;
  const Motor m = flipped ? -motor : motor;

  const double s = m[0];
  const double y = m[1] * m[1] + m[2] * m[2] + m[3] * m[3];
  const double angle = 2.0 * std::atan2(std::sqrt(y), s);
  constexpr double kBranchTol = 1e-9;
  if (angle >= M_PI - kBranchTol) {
    throw BranchError("log_jacobian: rotation angle within tolerance of pi");
  }

  const double h = detail::hfun(y, s);
  const double dh_dy = detail::dhfun_dy(y, s);
  const double dh_ds = detail::dhfun_ds(y, s);
  const Bivector beta(h * m[1], h * m[2], h * m[3], 0, 0, 0);

  // Rotor block: beta = h(y, s) * b.
  Eigen::Matrix<double, 3, 4> dbeta;  // by (s, b1, b2, b3)
  for (int i = 0; i < 3; ++i) dbeta(i, 0) = dh_ds * m[1 + i];
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      dbeta(i, j + 1) = dh_dy * 2.0 * m[1 + j] * m[1 + i] + (i == j ? h : 0.0);
    }
  }

  const Eigen::Matrix<double, 4, 3> L = detail::exp_nilpotent_matrix(beta);
  const auto qr = L.colPivHouseholderQr();
  const Eigen::Vector4d nbar(m[4], m[5], m[6], m[7]);
  const Eigen::Vector3d t = qr.solve(nbar);

  LogJacobian jac = LogJacobian::Zero();
  // Translation block response to the nilpotent coefficients.
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d unit = Eigen::Vector4d::Zero();
    unit(k) = 1.0;
    jac.block<3, 1>(3, 4 + k) = qr.solve(unit);
  }
  // Response to the rotor coefficients (s, b): both blocks move.
  for (int j = 0; j < 4; ++j) {
    const Bivector db(dbeta(0, j), dbeta(1, j), dbeta(2, j), 0, 0, 0);
    jac.block<3, 1>(0, j) = Eigen::Vector3d(db[0], db[1], db[2]);
    const Eigen::Matrix<double, 4, 3> dL = detail::exp_nilpotent_matrix_deriv(beta, db);
    jac.block<3, 1>(3, j) = qr.solve(Eigen::Vector4d(-dL * t));
  }

  return flipped ? LogJacobian(-jac) : jac;
}

}  // namespace coopga::cga
