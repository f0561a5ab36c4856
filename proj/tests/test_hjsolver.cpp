#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "frontlab/averaging.hpp"
#include "frontlab/error.hpp"
#include "frontlab/hjsolver.hpp"
#include "support.hpp"

using namespace frontlab;
using namespace frontlab::testing;

namespace {

SolverConfig box_1d(double h, double eps, double T) {
  SolverConfig c;
  c.h = h;
  c.eps = eps;
  c.lo = Vec{-2.0};
  c.hi = Vec{2.0};
  c.T = T;
  return c;
}

const SpaceFunction kCone = [](const Vec& y) { return y.norm(); };
const SpaceFunction kCapped = [](const Vec& y) { return std::min(std::abs(y[0]), 2.0); };

}  // namespace

TEST_CASE("finite differences on the constant speed cone") {
  SUBCASE("1D") {
    Environment env(constant_spec(1, 1.5));
    SolverConfig c = box_1d(1.0 / 128, 1.0, 1.0);
    c.output_times = {0.5, 1.0};
    const auto f = solve_oscillatory_fd(env, c, kCone);
    const double dt = cfl_limit(env, c.h);
    for (std::size_t ti = 0; ti < 2; ++ti) {
      for (std::size_t k = 0; k < f.grid.size(); ++k) {
        const double exact = std::max(std::abs(f.grid.point(k)[0]) - 1.5 * f.times[ti], 0.0);
        CHECK(std::abs(f.at(ti, k) - exact) <= 2.0 * (c.h + dt) * c.T);
      }
    }
  }
  SUBCASE("2D") {
    Environment env(constant_spec(2, 1.0));
    SolverConfig c;
    c.h = 1.0 / 32;
    c.lo = Vec{-1.0, -1.0};
    c.hi = Vec{1.0, 1.0};
    c.T = 0.5;
    const auto f = solve_oscillatory_fd(env, c, kCone);
    double err = 0.0;
    for (std::size_t k = 0; k < f.grid.size(); ++k) {
      const double exact = std::max(f.grid.point(k).norm() - 0.5, 0.0);
      err = std::max(err, std::abs(f.at(0, k) - exact));
    }
    CHECK(err <= 4.0 * (c.h + cfl_limit(env, c.h)) * c.T + 0.02);
  }
}

TEST_CASE("finite differences preserve order") {
  Environment env(sine_cos_1d());
  SolverConfig c = box_1d(1.0 / 64, 0.25, 0.5);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = u(rng);
    const double b = u(rng);
    const double lift = std::abs(u(rng)) + 0.01;
    const SpaceFunction lower = [=](const Vec& y) { return std::sin(a * y[0]) + b * std::abs(y[0]); };
    const SpaceFunction upper = [=](const Vec& y) { return lower(y) + lift * (1.0 + std::cos(3.0 * y[0])); };
    const auto fl = solve_oscillatory_fd(env, c, lower);
    const auto fu = solve_oscillatory_fd(env, c, upper);
    for (std::size_t k = 0; k < fl.grid.size(); ++k) CHECK(fl.at(0, k) <= fu.at(0, k));
  }
}

TEST_CASE("CFL violations are reported") {
  Environment env(constant_spec(1, 2.0));
  SolverConfig c = box_1d(0.1, 1.0, 1.0);
  c.dt = 0.06;
  try {
    (void)solve_oscillatory_fd(env, c, kCone);
    FAIL("expected cfl-violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CflViolation);
  }
  CHECK(cfl_limit(Environment(periodic_2d()), 0.1) == doctest::Approx(0.1 / 4.0));
}

TEST_CASE("non-finite data is reported") {
  Environment env(constant_spec(1, 1.0));
  SolverConfig c = box_1d(0.1, 1.0, 0.2);
  try {
    (void)solve_oscillatory_fd(env, c, [](const Vec& y) { return y[0] > 0.0 ? std::nan("") : 0.0; });
    FAIL("expected numeric-blowup");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NumericBlowup);
  }
}

TEST_CASE("translation by a multiple of eps") {
  Environment env(sine_cos_1d());
  const double eps = 0.25;
  SolverConfig c = box_1d(1.0 / 64, eps, 0.5);
  const double z = 2.0 * eps;
  const auto f = solve_oscillatory_fd(env, c, kCapped);
  const auto g = solve_oscillatory_fd(env, c, [&](const Vec& y) { return kCapped(Vec{y[0] - z}); });
  const long shift = std::lround(z / c.h);
  for (std::size_t k = 0; k + static_cast<std::size_t>(shift) < f.grid.size(); ++k) {
    CHECK(std::abs(g.at(0, k + static_cast<std::size_t>(shift)) - f.at(0, k)) <= 1e-9);
  }
}

TEST_CASE("control representation") {
  SUBCASE("constant speed cone and t = 0") {
    Environment env(constant_spec(2, 1.0));
    SolverConfig c;
    c.eps = 0.5;
    c.control_h = 1.0 / 64;
    const std::vector<SpaceTimePoint> pts{{Vec{0.3, 0.4}, 0.0}, {Vec{1.0, 1.0}, 0.5}, {Vec{0.2, -0.1}, 0.5},
                                          {Vec{-1.5, 0.2}, 1.0}};
    const auto v = solve_by_control(env, c, kCone, pts);
    CHECK(v[0] == doctest::Approx(0.5));
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double exact = std::max(pts[i].x.norm() - pts[i].t, 0.0);
      CHECK(std::abs(v[i] - exact) <= 2.0 * c.control_h * c.eps * std::sqrt(2.0));
    }
  }
  SUBCASE("agrees with finite differences") {
    Environment env(sine_cos_1d());
    SolverConfig c = box_1d(1.0 / 256, 1.0 / 8, 1.0);
    c.output_times = {0.25, 0.5, 0.75, 1.0};
    const auto f = solve_oscillatory_fd(env, c, kCapped);
    std::mt19937_64 rng(4);
    std::vector<SpaceTimePoint> pts;
    std::vector<double> fd;
    for (int i = 0; i < 20; ++i) {
      const std::size_t ti = rng() % f.times.size();
      const std::size_t k = rng() % f.grid.size();
      pts.push_back({f.grid.point(k), f.times[ti]});
      fd.push_back(f.at(ti, k));
    }
    const auto ctl = solve_by_control(env, c, kCapped, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(ctl[i] - fd[i]) <= 5e-2);
  }
}

TEST_CASE("drift variant") {
  EnvironmentSpec s = constant_spec(2, 1.0);
  DriftSpec d;
  d.constant = Vec{0.3, -0.2};
  d.eta = 0.5;
  s.drift = d;
  Environment env(s);
  const Vec b = d.constant;
  SolverConfig c;
  c.h = 1.0 / 32;
  c.lo = Vec{-1.0, -1.0};
  c.hi = Vec{1.0, 1.0};
  c.T = 0.5;
  c.eps = 0.5;
  c.control_h = 1.0 / 32;
  const auto f = solve_oscillatory_fd(env, c, kCone);
  std::vector<SpaceTimePoint> pts;
  double fd_err = 0.0;
  for (std::size_t k = 0; k < f.grid.size(); k += 37) {
    const Vec x = f.grid.point(k);
    const double exact = std::max((x - b * 0.5).norm() - 0.5, 0.0);
    fd_err = std::max(fd_err, std::abs(f.at(0, k) - exact));
    pts.push_back({x, 0.5});
  }
  CHECK(fd_err <= 0.1);
  const auto v = solve_by_control(env, c, kCone, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double exact = std::max((pts[i].x - b * 0.5).norm() - 0.5, 0.0);
    CHECK(std::abs(v[i] - exact) <= 3.0 * c.control_h * c.eps);
  }
}

TEST_CASE("non-coercive representation") {
  const SpaceTimeFunction v0 = [](const Vec& y, double s) { return std::abs(y[0] - 0.3) + 0.5 * std::sin(s); };
  SUBCASE("constant speed") {
    Environment env(constant_spec(1, 1.0));
    SolverConfig c;
    c.eps = 0.25;
    c.control_h = 1.0 / 256;
    const std::vector<NoncoercivePoint> pts{{Vec{0.0}, 0.4, 0.0}, {Vec{1.0}, 0.7, 0.5}, {Vec{0.2}, -0.3, 0.25}};
    const auto v = solve_noncoercive(env, c, v0, pts);
    CHECK(v[0] == doctest::Approx(v0(Vec{0.0}, 0.4)));
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const auto& p = pts[i];
      // min of |y - 0.3| over |y - x| <= t
      const double exact = std::max(std::abs(p.x[0] - 0.3) - p.t, 0.0) + 0.5 * std::sin(p.xn1 - p.t);
      CHECK(std::abs(v[i] - exact) <= 2.0 * c.control_h * c.eps);
    }
  }
  SUBCASE("reduction to the plain solve") {
    Environment env(sine_1d());
    SolverConfig c;
    c.eps = 0.125;
    c.control_h = 1.0 / 256;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ux(-1.0, 1.0);
    std::uniform_real_distribution<double> ut(0.1, 1.0);
    for (int i = 0; i < 5; ++i) {
      const NoncoercivePoint p{Vec{ux(rng)}, ux(rng), ut(rng)};
      const double v = solve_noncoercive(env, c, v0, {p})[0];
      const SpaceFunction u0 = [&](const Vec& y) { return v0(y, p.xn1 - p.t); };
      const double u = solve_by_control(env, c, u0, {{p.x, p.t}})[0];
      CHECK(std::abs(v - u) <= c.control_h * c.eps);
    }
  }
}

TEST_CASE("homogenization trend on a coarse sample") {
  Environment env(sine_cos_1d());
  ReachOptions o;
  o.h = 1.0 / 512;
  const auto est = estimate_limit_shape(env, {50, 100}, o);
  SolverConfig c;
  c.control_h = 1.0 / 256;
  const SpaceGrid g = SpaceGrid::covering(1, 0.25, Vec{-2.0}, Vec{2.0});
  const auto rows = homogenization_trend(env, EffectiveModel{est.d_est, 0.0}, kCapped, {0.25, 0.125, 0.0625}, g,
                                         {0.5, 1.0}, c);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].error < rows[1].error);
  CHECK(rows[1].error < rows[0].error);
}
