#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "frontlab/averaging.hpp"
#include "frontlab/effective.hpp"
#include "frontlab/error.hpp"
#include "support.hpp"

using namespace frontlab;
using namespace frontlab::testing;

namespace {

Polytope disc(double r, int sides = 256) {
  std::vector<Vec> pts;
  for (int i = 0; i < sides; ++i) {
    const double th = 2.0 * std::numbers::pi * i / sides;
    pts.push_back(Vec{r * std::cos(th), r * std::sin(th)});
  }
  return Polytope::hull(2, pts);
}

}  // namespace

TEST_CASE("effective Hamiltonian of a disc") {
  const EffectiveModel m{disc(1.5), 0.0};
  const double polygon = 1.0 - std::cos(std::numbers::pi / 256);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int i = 0; i < 20; ++i) {
    const Vec p{g(rng), g(rng)};
    CHECK(std::abs(effective_hamiltonian(m, p) - 1.5 * p.norm()) <= 1.5 * p.norm() * polygon + 1e-12);
  }
  CHECK(effective_hamiltonian(m, Vec{0.0, 0.0}) == 0.0);
}

TEST_CASE("effective Hamiltonian is convex and positively homogeneous") {
  const Polytope d = Polytope::hull(2, {Vec{2.0, 0.1}, Vec{-1.0, 1.0}, Vec{-0.5, -1.2}, Vec{0.3, 0.9}});
  const EffectiveModel m{d, 0.0};
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int i = 0; i < 50; ++i) {
    const Vec p{g(rng), g(rng)};
    const Vec q{g(rng), g(rng)};
    const double lam = std::abs(g(rng)) + 0.1;
    CHECK(effective_hamiltonian(m, p * lam) == doctest::Approx(lam * effective_hamiltonian(m, p)));
    CHECK(effective_hamiltonian(m, (p + q) * 0.5) <=
          0.5 * (effective_hamiltonian(m, p) + effective_hamiltonian(m, q)) + 1e-12);
  }
}

TEST_CASE("effective Lagrangian is the indicator of D") {
  const EffectiveModel m{Polytope::hull(1, {Vec{-1.0}, Vec{2.0}}), 0.01};
  CHECK(effective_lagrangian(m, Vec{0.5}) == 0.0);
  CHECK(effective_lagrangian(m, Vec{2.005}) == 0.0);
  CHECK(std::isinf(effective_lagrangian(m, Vec{2.1})));
}

TEST_CASE("1D autonomous Hamiltonian matches the rotation number") {
  Environment env(sine_1d());
  ReachOptions o;
  o.h = 1.0 / 1024;
  const auto est = estimate_limit_shape(env, {100, 200}, o);
  const EffectiveModel m{est.d_est, 0.0};
  CHECK(std::abs(effective_hamiltonian(m, Vec{1.0}) - std::sqrt(3.0)) <= 0.02 * std::sqrt(3.0));
  CHECK(std::abs(effective_hamiltonian(m, Vec{-1.0}) - std::sqrt(3.0)) <= 0.02 * std::sqrt(3.0));
}

TEST_CASE("Lax-Oleinik solutions") {
  SUBCASE("t = 0 returns the data") {
    const EffectiveModel m{Polytope::hull(1, {Vec{-1.0}, Vec{1.0}}), 0.0};
    const SpaceGrid g = SpaceGrid::covering(1, 0.1, Vec{-1.0}, Vec{1.0});
    const SpaceFunction u0 = [](const Vec& y) { return std::sin(3.0 * y[0]); };
    const auto f = solve_homogenized(m, u0, g, {0.0});
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(f.at(0, k) == u0(g.point(k)));
  }
  SUBCASE("linear data on an interval") {
    const EffectiveModel m{Polytope::hull(1, {Vec{-1.0}, Vec{2.0}}), 0.0};
    const SpaceGrid g = SpaceGrid::covering(1, 1.0 / 16, Vec{-2.0}, Vec{2.0});
    const auto f = solve_homogenized(m, [](const Vec& y) { return y[0]; }, g, {0.3, 1.0});
    for (std::size_t ti = 0; ti < 2; ++ti) {
      for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(f.at(ti, k) == doctest::Approx(g.point(k)[0] - 2.0 * f.times[ti]).epsilon(1e-12));
      }
    }
  }
  SUBCASE("eikonal cone in 2D") {
    const EffectiveModel m{disc(1.0), 0.0};
    const SpaceGrid g = SpaceGrid::covering(2, 0.25, Vec{-2.0, -2.0}, Vec{2.0, 2.0});
    const auto f = solve_homogenized(m, [](const Vec& y) { return y.norm(); }, g, {0.5, 1.0});
    for (std::size_t ti = 0; ti < 2; ++ti) {
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double exact = std::max(g.point(k).norm() - f.times[ti], 0.0);
        CHECK(std::abs(f.at(ti, k) - exact) <= g.h * std::sqrt(2.0) + 1e-3);
      }
    }
  }
  SUBCASE("monotone in t and inherits the modulus of the data") {
    const EffectiveModel m{Polytope::hull(2, {Vec{-1.0, -0.5}, Vec{1.5, 0.0}, Vec{0.0, 1.0}}), 0.0};
    const SpaceGrid g = SpaceGrid::covering(2, 0.125, Vec{-1.0, -1.0}, Vec{1.0, 1.0});
    const SpaceFunction u0 = [](const Vec& y) { return std::min(std::abs(y[0]) + 0.5 * std::abs(y[1]), 1.0); };
    const auto f = solve_homogenized(m, u0, g, {0.2, 0.4, 0.8});
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(f.at(1, k) <= f.at(0, k) + 1e-12);
      CHECK(f.at(2, k) <= f.at(1, k) + 1e-12);
    }
    // u0 has Lipschitz constant sqrt(1.25); add the lattice scan error on each side
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
    for (int i = 0; i < 40; ++i) {
      const std::size_t a = pick(rng);
      const std::size_t b = pick(rng);
      const double d = (g.point(a) - g.point(b)).norm();
      CHECK(std::abs(f.at(2, a) - f.at(2, b)) <= std::sqrt(1.25) * (d + 2.0 * g.h * std::sqrt(2.0)) + 1e-12);
    }
  }
  SUBCASE("semigroup") {
    const EffectiveModel m{Polytope::hull(1, {Vec{-1.0}, Vec{2.0}}), 0.0};
    const double h = 1.0 / 64;
    const SpaceFunction u0 = [](const Vec& y) { return std::min(std::abs(y[0]), 2.0); };
    const SpaceGrid wide = SpaceGrid::covering(1, h, Vec{-6.0}, Vec{6.0});
    const auto first = solve_homogenized(m, u0, wide, {0.5});
    const SpaceFunction mid = [&](const Vec& y) { return first.interpolate(0, y); };
    const SpaceGrid g = SpaceGrid::covering(1, h, Vec{-2.0}, Vec{2.0});
    const auto two_step = solve_homogenized(m, mid, g, {0.7});
    const auto one_step = solve_homogenized(m, u0, g, {1.2});
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(two_step.at(0, k) - one_step.at(0, k)) <= 2.0 * h);
  }
  SUBCASE("search window") {
    const EffectiveModel m{Polytope::hull(1, {Vec{-1.0}, Vec{1.0}}), 0.0};
    const SpaceGrid g = SpaceGrid::covering(1, 0.5, Vec{-1.0}, Vec{1.0});
    try {
      (void)solve_homogenized(m, [](const Vec& y) { return y[0]; }, g, {3.0}, 2.0);
      FAIL("expected window-overflow");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::WindowOverflow);
    }
  }
}

TEST_CASE("scalar field helpers") {
  const SpaceGrid g = SpaceGrid::covering(2, 0.5, Vec{0.0, 0.0}, Vec{1.0, 1.0});
  CHECK(g.size() == 9);
  ScalarField f;
  f.grid = g;
  f.times = {0.0, 1.0};
  for (std::size_t ti = 0; ti < 2; ++ti) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Vec x = g.point(k);
      f.values.push_back(x[0] + 2.0 * x[1] + static_cast<double>(ti));
    }
  }
  CHECK(f.interpolate(1, Vec{0.3, 0.7}) == doctest::Approx(0.3 + 1.4 + 1.0));
  CHECK(f.time_index(1.0) == 1);
  CHECK_THROWS_AS((void)f.time_index(0.5), Error);
  std::ostringstream os;
  f.dump_csv(os);
  CHECK(os.str().rfind("x1,x2,t,value\n0,0,0,0\n", 0) == 0);
}
