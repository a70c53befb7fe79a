#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "coopga/cga/motor.hpp"
#include "support/test_oracles.hpp"

using namespace coopga::cga;

namespace {

Bivector random_bivector(std::mt19937_64& rng, double rot_scale, double trans_scale = 1.0) {
  std::uniform_real_distribution<double> r(-rot_scale, rot_scale);
  std::uniform_real_distribution<double> t(-trans_scale, trans_scale);
  return Bivector(r(rng), r(rng), r(rng), t(rng), t(rng), t(rng));
}

Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3{u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("exp of zero is the identity motor") {
  const Motor m = motor_exp(Bivector());
  CHECK((m - Motor::identity()).norm() == 0.0);
}

TEST_CASE("rotors act like rotation matrices") {
  // the convention anchor: exp(-(pi/2)/2 e12) sends e1 to e2
  const Motor r = motor_exp(Bivector(-M_PI / 4.0, 0, 0, 0, 0, 0));
  const Vec3 y = r.act_on_point({1, 0, 0});
  CHECK_THAT(y[0], Catch::Matchers::WithinAbs(0.0, 1e-14));
  CHECK_THAT(y[1], Catch::Matchers::WithinAbs(1.0, 1e-14));
  CHECK_THAT(y[2], Catch::Matchers::WithinAbs(0.0, 1e-14));

  auto rng = oracle::test_rng(21);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    Eigen::Vector3d axis = Eigen::Vector3d::Random().normalized();
    const double th = angle(rng);
    const Motor rot = Motor::rotor({axis(0), axis(1), axis(2)}, th);
    const Eigen::Matrix3d want = oracle::axis_angle_matrix(axis, th);
    const Vec3 p = random_vec(rng);
    const Vec3 got = rot.act_on_point(p);
    const Eigen::Vector3d ref = want * Eigen::Vector3d(p[0], p[1], p[2]);
    CHECK_THAT(got[0], Catch::Matchers::WithinAbs(ref(0), 1e-12));
    CHECK_THAT(got[1], Catch::Matchers::WithinAbs(ref(1), 1e-12));
    CHECK_THAT(got[2], Catch::Matchers::WithinAbs(ref(2), 1e-12));
  }
}

TEST_CASE("quaternion constructor matches the quaternion rotation") {
  auto rng = oracle::test_rng(22);
  for (int k = 0; k < 50; ++k) {
    Eigen::Quaterniond q = Eigen::Quaterniond::UnitRandom();
    const Motor rot = Motor::from_quaternion(q.w(), q.x(), q.y(), q.z());
    const Vec3 p = random_vec(rng);
    const Eigen::Vector3d ref = q.toRotationMatrix() * Eigen::Vector3d(p[0], p[1], p[2]);
    const Vec3 got = rot.act_on_point(p);
    CHECK_THAT(got[0], Catch::Matchers::WithinAbs(ref(0), 1e-12));
    CHECK_THAT(got[1], Catch::Matchers::WithinAbs(ref(1), 1e-12));
    CHECK_THAT(got[2], Catch::Matchers::WithinAbs(ref(2), 1e-12));
  }
}

TEST_CASE("translators move embedded points") {
  auto rng = oracle::test_rng(23);
  for (int k = 0; k < 50; ++k) {
    const Vec3 t = random_vec(rng, 2.0);
    const Vec3 x = random_vec(rng, 2.0);
    const Motor tr = Motor::translator(t);
    const Multivector moved = tr.sandwich(embed_point(x));
    const Multivector want = embed_point(x[0] + t[0], x[1] + t[1], x[2] + t[2]);
    CHECK((moved - want).norm() <= 1e-12 * std::max(1.0, want.norm()));
  }
  // translator as exponential: exp(-t^ei/2) translates by t
  const Motor t2 = motor_exp(Bivector::translation({-0.5, 1.0, 0.25}) * -0.5);
  CHECK((t2 - Motor::translator({-0.5, 1.0, 0.25})).norm() <= 1e-15);
}

TEST_CASE("exp produces unit motors and sandwich preserves grade and distance") {
  auto rng = oracle::test_rng(24);
  for (int k = 0; k < 100; ++k) {
    const Motor m = motor_exp(random_bivector(rng, 2.0));
    CHECK(m.unit_error() <= 1e-12);
  }

  for (int k = 0; k < 20; ++k) {
    const Motor m = motor_exp(random_bivector(rng, 1.2));
    const Vec3 a = random_vec(rng);
    const Vec3 b = random_vec(rng);
    // grade preservation on a point
    const Multivector pa = m.sandwich(embed_point(a));
    CHECK((pa - pa.grade(1)).norm() <= 1e-13 * pa.norm());
    // isometry on extracted positions
    const Vec3 ma = extract_point(pa);
    const Vec3 mb = extract_point(m.sandwich(embed_point(b)));
    const auto dist = [](const Vec3& u, const Vec3& v) {
      return std::sqrt((u[0] - v[0]) * (u[0] - v[0]) + (u[1] - v[1]) * (u[1] - v[1]) +
                       (u[2] - v[2]) * (u[2] - v[2]));
    };
    CHECK_THAT(dist(ma, mb), Catch::Matchers::WithinAbs(dist(a, b), 1e-12));
  }

  const Multivector x = embed_point(1, 2, 3);
  CHECK((Motor::identity().sandwich(x) - x).norm() == 0.0);
}

TEST_CASE("sandwich rejects non-unit motors") {
  Motor bad = Motor::identity();
  bad[0] = 1.1;
  CHECK_THROWS_AS(bad.sandwich(Multivector::e0()), coopga::NonUnitMotorError);
  CHECK_THROWS_AS(motor_log(bad), coopga::NonUnitMotorError);
}

TEST_CASE("log inverts exp on the principal branch") {
  CHECK(motor_log(Motor::identity()).norm() == 0.0);

  auto rng = oracle::test_rng(25);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    // rotation angle 2|b| kept inside (0, pi - 0.1)
    Bivector b = random_bivector(rng, (M_PI - 0.1) / (2.0 * std::sqrt(3.0)), 2.0);
    worst = std::max(worst, (motor_log(motor_exp(b)) - b).norm());
  }
  CHECK(worst <= 1e-9);

  // pure translator by (1, 0, 0): only the e1i coefficient survives
  const Bivector lt = motor_log(Motor::translator({1, 0, 0}));
  CHECK_THAT(lt[3], Catch::Matchers::WithinAbs(-0.5, 1e-15));
  CHECK(std::abs(lt[0]) + std::abs(lt[1]) + std::abs(lt[2]) + std::abs(lt[4]) +
            std::abs(lt[5]) ==
        0.0);
}

TEST_CASE("log canonicalizes the motor sign") {
  const Motor m = Motor::rotor({0, 0, 1}, 0.8) * Motor::translator({0.2, 0, 0.1});
  CHECK((motor_log(-m) - motor_log(m)).norm() <= 1e-14);
}

TEST_CASE("log rejects the pi branch") {
  CHECK_THROWS_AS(motor_log(Motor::rotor({0, 0, 1}, M_PI)), coopga::BranchError);
  CHECK_THROWS_AS(motor_log(Motor::rotor({0, 1, 0}, M_PI - 1e-10)), coopga::BranchError);
  CHECK_NOTHROW(motor_log(Motor::rotor({0, 1, 0}, M_PI - 1e-6)));
}

TEST_CASE("translator-rotor split") {
  auto rng = oracle::test_rng(26);
  for (int k = 0; k < 50; ++k) {
    const Motor m = motor_exp(random_bivector(rng, 1.2));
    const Motor r = m.rotor_part();
    const Motor t = m.translator_part();
    CHECK(r.unit_error() <= 1e-12);
    CHECK((t * r - m).norm() <= 1e-12);
    // the translator factor is a pure translator
    CHECK(std::abs(t[1]) + std::abs(t[2]) + std::abs(t[3]) <= 1e-12);
    CHECK_THAT(t[0], Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK(std::abs(t[7]) <= 1e-12);
    // translation() reports where the origin goes
    const Vec3 o = m.act_on_point({0, 0, 0});
    const Vec3 tr = m.translation();
    CHECK_THAT(tr[0], Catch::Matchers::WithinAbs(o[0], 1e-12));
    CHECK_THAT(tr[1], Catch::Matchers::WithinAbs(o[1], 1e-12));
    CHECK_THAT(tr[2], Catch::Matchers::WithinAbs(o[2], 1e-12));
  }
}

TEST_CASE("motor products stay unit and compose point actions") {
  auto rng = oracle::test_rng(27);
  for (int k = 0; k < 50; ++k) {
    const Motor a = motor_exp(random_bivector(rng, 1.0));
    const Motor b = motor_exp(random_bivector(rng, 1.0));
    const Motor ab = a * b;
    CHECK(ab.unit_error() <= 1e-12);
    const Vec3 p = random_vec(rng);
    const Vec3 via_product = ab.act_on_point(p);
    const Vec3 via_chain = a.act_on_point(b.act_on_point(p));
    CHECK_THAT(via_product[0], Catch::Matchers::WithinAbs(via_chain[0], 1e-12));
    CHECK_THAT(via_product[1], Catch::Matchers::WithinAbs(via_chain[1], 1e-12));
    CHECK_THAT(via_product[2], Catch::Matchers::WithinAbs(via_chain[2], 1e-12));
  }
}
