// Conformal embedding of Euclidean points and construction of the round and
// flat primitives used by the dual-arm residuals.

#pragma once

#include <array>
#include <cmath>

#include "coopga/cga/multivector.hpp"
#include "coopga/errors.hpp"

namespace coopga::cga {

using Vec3 = std::array<double, 3>;

// P = e0 + x + |x|^2/2 * ei. Null by construction, ei|P = -1.
inline Multivector embed_point(const Vec3& x) {
  Multivector p;
  p[kSlotE0] = 1.0;
  p[kSlotE1] = x[0];
  p[kSlotE2] = x[1];
  p[kSlotE3] = x[2];
  p[kSlotEi] = 0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  return p;
}

inline Multivector embed_point(double x, double y, double z) {
  return embed_point(Vec3{x, y, z});
}

// Inverse of embed_point after normalizing the representative so that
// ei|P = -1. Points at infinity (ei|P = 0) have no Euclidean preimage.
inline Vec3 extract_point(const Multivector& p) {
  const double w = -Multivector::ei().inner(p).scalar_part();
  if (std::abs(w) < 1e-12) {
    throw Error("extract_point: point at infinity (ei|P = 0)");
  }
  return Vec3{p[kSlotE1] / w, p[kSlotE2] / w, p[kSlotE3] / w};
}

inline Multivector point_pair(const Multivector& p1, const Multivector& p2) {
  return p1.outer(p2);
}

inline Multivector circle(const Multivector& p1, const Multivector& p2, const Multivector& p3) {
  return p1.outer(p2).outer(p3);
}

inline Multivector sphere(const Multivector& p1, const Multivector& p2, const Multivector& p3,
                          const Multivector& p4) {
  return p1.outer(p2).outer(p3).outer(p4);
}

// Flats carry the infinity factor.
inline Multivector line_through_points(const Vec3& a, const Vec3& b) {
  return embed_point(a).outer(embed_point(b)).outer(Multivector::ei());
}

inline Multivector plane_through_points(const Vec3& a, const Vec3& b, const Vec3& c) {
  return embed_point(a).outer(embed_point(b)).outer(embed_point(c)).outer(Multivector::ei());
}

// Euclidean direction of a line blade, read off the e_k0i coefficients of
// L = e0^d^ei + (p^d)^ei.
inline Vec3 line_direction(const Multivector& line) {
  const Multivector e0di = Multivector::e0().outer(Multivector::e1()).outer(Multivector::ei());
  // e0^e1^ei = -e1^e0^ei in canonical order, so the coefficient carries a sign.
  const int s1 = slot_of_mask(kMaskE1 | kMaskE0 | kMaskEi);
  const int s2 = slot_of_mask(kMaskE2 | kMaskE0 | kMaskEi);
  const int s3 = slot_of_mask(kMaskE3 | kMaskE0 | kMaskEi);
  const double sign = e0di[s1];  // +-1, fixed by the blade ordering
  return Vec3{line[s1] / sign, line[s2] / sign, line[s3] / sign};
}

// Moment bivector dual vector of a line: the e_jk_i coefficients map back to
// the vector m with p^d = m* (used for collinearity diagnostics).
inline Vec3 line_moment(const Multivector& line) {
  const int s23 = slot_of_mask(kMaskE2 | kMaskE3 | kMaskEi);
  const int s13 = slot_of_mask(kMaskE1 | kMaskE3 | kMaskEi);
  const int s12 = slot_of_mask(kMaskE1 | kMaskE2 | kMaskEi);
  return Vec3{line[s23], -line[s13], line[s12]};
}

// Scale a line so its direction has unit Euclidean magnitude. Keeps the
// commutator residuals of collinearity constraints scale-free.
inline Multivector normalize_line(const Multivector& line) {
  const Vec3 d = line_direction(line);
  const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  if (n < 1e-12) throw Error("normalize_line: degenerate line (zero direction)");
  return line / n;
}

// Line through `point` with direction `dir` (need not be unit), normalized.
inline Multivector line_point_direction(const Vec3& point, const Vec3& dir) {
  const double n = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
  if (n < 1e-12) throw Error("line_point_direction: zero direction");
  const Vec3 b = {point[0] + dir[0] / n, point[1] + dir[1] / n, point[2] + dir[2] / n};
  return normalize_line(line_through_points(point, b));
}

// Squared Euclidean distance via the conformal inner product identity
// |x1 - x2|^2 = -2 P1|P2.
inline double squared_distance(const Multivector& p1, const Multivector& p2) {
  return -2.0 * p1.inner(p2).scalar_part();
}

}  // namespace coopga::cga
