// Euclidean-geometry checks used to gate scenario acceptance: circle
// incidence via circumcenter/radius/plane, plane incidence via the normal
// form, and line collinearity via Pluecker coordinates.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "coopga/cga/primitives.hpp"

namespace coopga::sim {

struct CircleGeometry {
  Eigen::Vector3d center;
  Eigen::Vector3d normal;  // unit
  double radius = 0.0;
};

inline CircleGeometry circumcircle(const cga::Vec3& pa, const cga::Vec3& pb,
                                   const cga::Vec3& pc) {
  const Eigen::Vector3d a(pa[0], pa[1], pa[2]);
  const Eigen::Vector3d b(pb[0], pb[1], pb[2]);
  const Eigen::Vector3d c(pc[0], pc[1], pc[2]);
  const Eigen::Vector3d ab = b - a;
  const Eigen::Vector3d ac = c - a;
  const Eigen::Vector3d n = ab.cross(ac);
  const double n2 = n.squaredNorm();
  if (n2 < 1e-18) throw Error("circumcircle: collinear points");
  // Classic circumcenter formula relative to a.
  const Eigen::Vector3d rel =
      (ac.squaredNorm() * n.cross(ab) + ab.squaredNorm() * ac.cross(n)) / (2.0 * n2);
  CircleGeometry g;
  g.center = a + rel;
  g.normal = n.normalized();
  g.radius = rel.norm();
  return g;
}

// Distance from x to the circle (out-of-plane and in-plane radial error
// combined).
inline double circle_distance(const CircleGeometry& g, const cga::Vec3& xin) {
  const Eigen::Vector3d x(xin[0], xin[1], xin[2]);
  const Eigen::Vector3d d = x - g.center;
  const double h = d.dot(g.normal);
  const Eigen::Vector3d in_plane = d - h * g.normal;
  const double radial = in_plane.norm() - g.radius;
  return std::sqrt(h * h + radial * radial);
}

// Signed distance of x from the plane through three points (unit normal form).
inline double plane_distance(const cga::Vec3& pa, const cga::Vec3& pb, const cga::Vec3& pc,
                             const cga::Vec3& xin) {
  const Eigen::Vector3d a(pa[0], pa[1], pa[2]);
  const Eigen::Vector3d b(pb[0], pb[1], pb[2]);
  const Eigen::Vector3d c(pc[0], pc[1], pc[2]);
  const Eigen::Vector3d x(xin[0], xin[1], xin[2]);
  const Eigen::Vector3d n = (b - a).cross(c - a).normalized();
  return (x - a).dot(n);
}

struct LineAgreement {
  double direction_cross = 0.0;  // |d1 x d2| after unit normalization
  double moment_error = 0.0;     // |m1 - m2| after sign alignment
};

// Collinearity of two line blades via their Pluecker data: identical lines
// (up to orientation) have parallel unit directions and equal moments.
inline LineAgreement compare_lines(const cga::Multivector& l1, const cga::Multivector& l2) {
  const cga::Multivector a = cga::normalize_line(l1);
  const cga::Multivector b = cga::normalize_line(l2);
  const cga::Vec3 d1v = cga::line_direction(a);
  const cga::Vec3 d2v = cga::line_direction(b);
  const cga::Vec3 m1v = cga::line_moment(a);
  const cga::Vec3 m2v = cga::line_moment(b);
  Eigen::Vector3d d1(d1v[0], d1v[1], d1v[2]), d2(d2v[0], d2v[1], d2v[2]);
  Eigen::Vector3d m1(m1v[0], m1v[1], m1v[2]), m2(m2v[0], m2v[1], m2v[2]);
  if (d1.dot(d2) < 0.0) {
    d2 = -d2;
    m2 = -m2;
  }
  LineAgreement out;
  out.direction_cross = d1.cross(d2).norm();
  out.moment_error = (m1 - m2).norm();
  return out;
}

}  // namespace coopga::sim
