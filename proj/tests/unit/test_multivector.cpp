#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "coopga/cga/multivector.hpp"
#include "support/rational_cayley.hpp"

using coopga::cga::CayleyTable;
using coopga::cga::kBladeCount;
using coopga::cga::kSlotE12;
using coopga::cga::kSlotE123i;
using coopga::cga::Multivector;

namespace {

Multivector random_multivector(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Multivector x;
  for (int i = 0; i < kBladeCount; ++i) x[i] = u(rng);
  return x;
}

Multivector random_vector(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Multivector x;
  for (int slot = 1; slot <= 5; ++slot) x[slot] = u(rng);
  return x;
}

}  // namespace

TEST_CASE("geometric product table matches the independent rational oracle") {
  const auto table = oracle::build_table();
  const CayleyTable& lib = CayleyTable::instance();
  for (int a = 0; a < kBladeCount; ++a) {
    for (int b = 0; b < kBladeCount; ++b) {
      const int ma = coopga::cga::mask_of_slot(a);
      const int mb = coopga::cga::mask_of_slot(b);
      std::array<double, kBladeCount> got{};
      for (const auto& t : lib.geometric(a, b)) {
        got[coopga::cga::mask_of_slot(t.slot)] += t.coeff;
      }
      for (int m = 0; m < kBladeCount; ++m) {
        const auto it = table[ma][mb].find(m);
        const double want = it == table[ma][mb].end() ? 0.0 : it->second.value();
        INFO("blade product " << a << " * " << b << " -> mask " << m);
        CHECK(got[m] == want);  // dyadic rationals: exact in double
      }
    }
  }
}

TEST_CASE("basis examples") {
  const Multivector e1 = Multivector::e1();
  const Multivector e2 = Multivector::e2();
  CHECK((e1 * e1 - Multivector::scalar(1)).norm() == 0.0);
  const Multivector e12 = e1 * e2;
  CHECK((e12 - Multivector::basis(kSlotE12)).norm() == 0.0);
  CHECK(Multivector::e0().inner(Multivector::ei()).scalar_part() == -1.0);
  CHECK((Multivector::e0() * Multivector::e0()).norm() == 0.0);
  CHECK((Multivector::ei() * Multivector::ei()).norm() == 0.0);
}

TEST_CASE("associativity on random triples") {
  auto rng = std::mt19937_64(2024);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Multivector x = random_multivector(rng);
    const Multivector y = random_multivector(rng);
    const Multivector z = random_multivector(rng);
    const Multivector lhs = (x * y) * z;
    const Multivector rhs = x * (y * z);
    const double scale = std::max(1.0, lhs.norm());
    worst = std::max(worst, (lhs - rhs).norm() / scale);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("vector geometric product splits into inner plus outer") {
  auto rng = std::mt19937_64(5);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Multivector a = random_vector(rng);
    const Multivector b = random_vector(rng);
    const Multivector split = a.inner(b) + a.outer(b);
    worst = std::max(worst, (a * b - split).max_abs());
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("outer and inner tables are grade selections of the geometric product") {
  auto rng = std::mt19937_64(77);
  std::uniform_int_distribution<int> pick(0, kBladeCount - 1);
  for (int k = 0; k < 200; ++k) {
    const int a = pick(rng);
    const int b = pick(rng);
    const Multivector xa = Multivector::basis(a, 1.3);
    const Multivector xb = Multivector::basis(b, -0.7);
    const int ga = coopga::cga::slot_grade(a);
    const int gb = coopga::cga::slot_grade(b);
    const Multivector geo = xa * xb;
    const Multivector outer_want = ga + gb > 5 ? Multivector() : geo.grade(ga + gb);
    CHECK((xa.outer(xb) - outer_want).norm() == 0.0);
    CHECK((xa.inner(xb) - geo.grade(std::abs(ga - gb))).norm() == 0.0);
  }
}

TEST_CASE("commutator equals (ab - ba)/2 and is antisymmetric") {
  auto rng = std::mt19937_64(99);
  for (int k = 0; k < 100; ++k) {
    const Multivector x = random_multivector(rng);
    const Multivector y = random_multivector(rng);
    const Multivector direct = (x * y - y * x) * 0.5;
    CHECK((x.commutator(y) - direct).norm() <= 1e-13 * std::max(1.0, direct.norm()));
    CHECK(x.commutator(x).norm() <= 1e-13 * std::max(1.0, x.norm_sq()));
  }
  const Multivector e12 = Multivector::basis(kSlotE12);
  const Multivector e13 = Multivector::basis(coopga::cga::kSlotE13);
  const Multivector direct = (e12 * e13 - e13 * e12) * 0.5;
  CHECK((e12.commutator(e13) - direct).norm() == 0.0);
  CHECK(direct.norm() > 0.5);  // a genuine nonzero table entry
}

TEST_CASE("reverse involution") {
  const Multivector x = Multivector::scalar(1) + Multivector::basis(kSlotE12);
  const Multivector want = Multivector::scalar(1) - Multivector::basis(kSlotE12);
  CHECK((x.reverse() - want).norm() == 0.0);

  // grade-4 blade keeps its sign under reversal
  const Multivector e123i = Multivector::basis(kSlotE123i);
  CHECK((e123i.reverse() - e123i).norm() == 0.0);

  auto rng = std::mt19937_64(11);
  for (int k = 0; k < 20; ++k) {
    const Multivector y = random_multivector(rng);
    CHECK((y.reverse().reverse() - y).norm() == 0.0);
  }
}

TEST_CASE("grade extraction partitions the multivector") {
  auto rng = std::mt19937_64(123);
  const Multivector x = random_multivector(rng);
  Multivector sum;
  for (int g = 0; g <= 5; ++g) {
    const Multivector part = x.grade(g);
    for (int i = 0; i < kBladeCount; ++i) {
      if (coopga::cga::slot_grade(i) != g) CHECK(part[i] == 0.0);
    }
    sum += part;
  }
  CHECK((sum - x).norm() == 0.0);
}
