#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "larmor/errors.hpp"
#include "larmor/potential.hpp"
#include "test_oracles.hpp"

using namespace larmor;

TEST_CASE("coulomb-xy values") {
  const CoulombXYPotential pot;
  CHECK(pot.value({0.7, 1.0, 0.1}) == doctest::Approx(1.0 / (100.0 * std::sqrt(1.49))).epsilon(1e-15));
  CHECK(pot.value({1.0, 0.0, 0.0}) == doctest::Approx(0.01).epsilon(1e-15));
  // independent of x3
  CHECK(pot.value({0.7, 1.0, -42.0}) == pot.value({0.7, 1.0, 0.1}));
}

TEST_CASE("coulomb-xy is singular on the x3-axis") {
  const CoulombXYPotential pot;
  CHECK_THROWS_AS(pot.value({0.0, 0.0, 5.0}), SingularPointError);
  CHECK_THROWS_AS(pot.gradient({0.0, 0.0, 0.0}), SingularPointError);
}

TEST_CASE("coulomb-xy force sign and direction match central differences") {
  const CoulombXYPotential pot;
  const Vec3 x{1.0, 0.0, 0.0};
  const Vec3 f = pot.force(x);
  const Vec3 fd = oracle::fd_gradient([&](const Vec3& p) { return pot.value(p); }, x);
  CHECK(norm(f + fd) <= 1e-8);
  CHECK(f.x > 0.0);  // repulsive from the axis
}

TEST_CASE("quadratic potential with identity Q") {
  const QuadraticPotential pot;
  CHECK(pot.value({1, 0, 0}) == doctest::Approx(0.5).epsilon(1e-15));
  const Vec3 f = pot.force({1, 2, 3});
  CHECK(norm_inf(f - Vec3{-1, -2, -3}) == 0.0);
}

TEST_CASE("quadratic potential symmetrizes its matrix") {
  const Mat3 q{{1, 2, 0, 0, 1, 0, 0, 0, 1}};
  const QuadraticPotential pot(q);
  CHECK(pot.q()(0, 1) == 1.0);
  CHECK(pot.q()(1, 0) == 1.0);
}

TEST_CASE("user-defined zero potential has zero force everywhere") {
  const UserDefinedPotential pot([](const Vec3&) { return 0.0; });
  CHECK(pot.value({3, -2, 8}) == 0.0);
  CHECK(norm(pot.force({3, -2, 8})) <= 1e-10);
}

TEST_CASE("user-defined potential without analytic gradient falls back to differences") {
  const UserDefinedPotential pot([](const Vec3& x) { return x.x * x.x + 2.0 * x.y; });
  const Vec3 g = pot.gradient({1.5, 0.0, 7.0});
  CHECK(g.x == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(g.y == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::fabs(g.z) <= 1e-9);
}

TEST_CASE("force is consistent with the value for every built-in potential") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const CoulombXYPotential coulomb;
  const QuadraticPotential quadratic(Vec3{1.0, 0.5, 2.0});
  const Potential* pots[] = {&coulomb, &quadratic};
  for (const Potential* pot : pots) {
    int tested = 0;
    while (tested < 100) {
      const Vec3 x{dist(rng), dist(rng), dist(rng)};
      if (x.x * x.x + x.y * x.y < 0.25) continue;  // stay away from the axis
      ++tested;
      const Vec3 f = pot->force(x);
      const Vec3 fd = oracle::fd_gradient([&](const Vec3& p) { return pot->value(p); }, x);
      CHECK(norm(f + fd) <= 1e-7 * (1.0 + norm(f)));
    }
  }
}

TEST_CASE("coulomb-xy is invariant under rotations about the x3-axis") {
  const CoulombXYPotential pot;
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 x{1.0 + dist(rng), 1.0 + dist(rng), dist(rng)};
    if (x.x * x.x + x.y * x.y < 0.09) continue;
    const double a = angle(rng);
    const Vec3 rx{std::cos(a) * x.x - std::sin(a) * x.y, std::sin(a) * x.x + std::cos(a) * x.y, x.z};
    CHECK(pot.value(rx) == doctest::Approx(pot.value(x)).epsilon(1e-14));
  }
}

TEST_CASE("potential factory") {
  CHECK(make_potential("coulomb-xy")->name() == "coulomb-xy");
  CHECK(make_potential("coulomb-xy", {0.5})->value({1, 0, 0}) == doctest::Approx(0.5));
  CHECK(make_potential("quadratic")->value({1, 0, 0}) == doctest::Approx(0.5));
  CHECK(make_potential("quadratic", {2, 0, 0})->value({1, 0, 0}) == doctest::Approx(1.0));
  CHECK(make_potential("zero")->value({5, 5, 5}) == 0.0);
  CHECK_THROWS_AS(make_potential("nope"), ConfigError);
  CHECK_THROWS_AS(make_potential("quadratic", {1.0}), ConfigError);
  CHECK_THROWS_AS(make_potential("zero", {1.0}), ConfigError);
  CHECK_THROWS_AS(make_potential("coulomb-xy", {1.0, 2.0}), ConfigError);
}
