#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "coopga/cga/primitives.hpp"

using namespace coopga::cga;

namespace {

Vec3 random_point(std::mt19937_64& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3{u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("point embedding") {
  CHECK((embed_point(0, 0, 0) - Multivector::e0()).norm() == 0.0);

  // (1,2,3) -> e0 + e1 + 2 e2 + 3 e3 + 7 ei
  Multivector want = Multivector::e0() + Multivector::e1() + 2.0 * Multivector::e2() +
                     3.0 * Multivector::e3() + 7.0 * Multivector::ei();
  CHECK((embed_point(1, 2, 3) - want).norm() == 0.0);

  auto rng = std::mt19937_64(1);
  for (int k = 0; k < 100; ++k) {
    const Multivector p = embed_point(random_point(rng));
    CHECK((p * p).norm() <= 1e-12);
    CHECK(Multivector::ei().inner(p).scalar_part() == -1.0);
  }
}

TEST_CASE("point extraction") {
  const Vec3 zero = extract_point(Multivector::e0());
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);
  CHECK(zero[2] == 0.0);

  // scale-invariant representative
  const Vec3 ones = extract_point(embed_point(1, 1, 1) * 2.0);
  CHECK_THAT(ones[0], Catch::Matchers::WithinAbs(1.0, 1e-14));
  CHECK_THAT(ones[1], Catch::Matchers::WithinAbs(1.0, 1e-14));
  CHECK_THAT(ones[2], Catch::Matchers::WithinAbs(1.0, 1e-14));

  const Vec3 rt = extract_point(embed_point(0.3, -0.2, 0.5));
  CHECK_THAT(rt[0], Catch::Matchers::WithinAbs(0.3, 1e-14));
  CHECK_THAT(rt[1], Catch::Matchers::WithinAbs(-0.2, 1e-14));
  CHECK_THAT(rt[2], Catch::Matchers::WithinAbs(0.5, 1e-14));

  CHECK_THROWS_AS(extract_point(Multivector::ei()), coopga::Error);
}

TEST_CASE("conformal distance identity") {
  auto rng = std::mt19937_64(17);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Vec3 a = random_point(rng);
    const Vec3 b = random_point(rng);
    const double want = (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                        (a[2] - b[2]) * (a[2] - b[2]);
    const double got = squared_distance(embed_point(a), embed_point(b));
    worst = std::max(worst, std::abs(got - want) / std::max(1.0, want));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("wedge antisymmetry and pointpairs") {
  CHECK(Multivector::e1().outer(Multivector::e1()).norm() == 0.0);

  auto rng = std::mt19937_64(3);
  for (int k = 0; k < 50; ++k) {
    const Multivector p = embed_point(random_point(rng));
    CHECK(p.outer(p).norm() <= 1e-13);
  }

  const Multivector pp = point_pair(embed_point(0, 0, 0), embed_point(1, 0, 0));
  CHECK(pp.norm() > 0.1);
  CHECK((pp - pp.grade(2)).norm() == 0.0);
  CHECK((pp + point_pair(embed_point(1, 0, 0), embed_point(0, 0, 0))).norm() == 0.0);
}

TEST_CASE("circle through three points contains them") {
  auto rng = std::mt19937_64(4);
  for (int k = 0; k < 30; ++k) {
    const Multivector p1 = embed_point(random_point(rng));
    const Multivector p2 = embed_point(random_point(rng));
    const Multivector p3 = embed_point(random_point(rng));
    const Multivector c = circle(p1, p2, p3);
    for (const Multivector* p : {&p1, &p2, &p3}) {
      CHECK(p->outer(c).norm() <= 1e-10 * std::max(1.0, c.norm()));
    }
  }
}

TEST_CASE("commutator containment of a pointpair in its circle") {
  auto rng = std::mt19937_64(8);
  for (int k = 0; k < 30; ++k) {
    const Multivector p1 = embed_point(random_point(rng));
    const Multivector p2 = embed_point(random_point(rng));
    const Multivector p3 = embed_point(random_point(rng));
    const Multivector c = circle(p1, p2, p3);
    const Multivector res = c.commutator(p1.outer(p2));
    CHECK(res.norm() <= 1e-10 * std::max(1.0, c.norm()));
    // a pair with one point off the circle does not commute
    const Multivector off = embed_point(random_point(rng));
    CHECK(c.commutator(p1.outer(off)).norm() > 1e-8);
  }
}

TEST_CASE("lines carry direction and moment") {
  // the x-axis line e0 ^ (e0 + e1 + ei/2) ^ ei
  const Multivector xaxis = Multivector::e0()
                                .outer(Multivector::e0() + Multivector::e1() +
                                       0.5 * Multivector::ei())
                                .outer(Multivector::ei());
  const Vec3 d = line_direction(xaxis);
  CHECK_THAT(d[0], Catch::Matchers::WithinAbs(1.0, 1e-14));
  CHECK_THAT(d[1], Catch::Matchers::WithinAbs(0.0, 1e-14));
  CHECK_THAT(d[2], Catch::Matchers::WithinAbs(0.0, 1e-14));
  const Vec3 m = line_moment(xaxis);
  CHECK(std::abs(m[0]) + std::abs(m[1]) + std::abs(m[2]) <= 1e-14);

  // point + direction form agrees with the two-point form
  const Multivector l1 = line_point_direction({0.2, -0.1, 0.4}, {0, 0, 2});
  const Multivector l2 = normalize_line(line_through_points({0.2, -0.1, 0.4}, {0.2, -0.1, 1.4}));
  CHECK((l1 - l2).norm() <= 1e-12);

  CHECK_THROWS_AS(line_point_direction({0, 0, 0}, {0, 0, 0}), coopga::Error);
}

TEST_CASE("plane incidence via wedge") {
  const Multivector plane = plane_through_points({0, 0, 0.5}, {1, 0, 0.5}, {0, 1, 0.5});
  CHECK(embed_point(0.3, -0.7, 0.5).outer(plane).norm() <= 1e-12);
  CHECK(embed_point(0.3, -0.7, 0.6).outer(plane).norm() > 1e-3);
}
