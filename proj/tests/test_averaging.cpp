#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "frontlab/averaging.hpp"
#include "frontlab/error.hpp"
#include "frontlab/parallel.hpp"
#include "support.hpp"

using namespace frontlab;
using namespace frontlab::testing;

namespace {

ReachOptions opts_h(double h) {
  ReachOptions o;
  o.h = h;
  return o;
}

Polytope disc(double r, int sides = 512) {
  std::vector<Vec> pts;
  for (int i = 0; i < sides; ++i) {
    const double th = 2.0 * std::numbers::pi * i / sides;
    pts.push_back(Vec{r * std::cos(th), r * std::sin(th)});
  }
  return Polytope::hull(2, pts);
}

const double kSqrt3 = std::sqrt(3.0);

}  // namespace

TEST_CASE("constant speed limit shape is the ball") {
  Environment env(constant_spec(2, 1.5));
  const auto est = estimate_limit_shape(env, {4, 8, 12}, opts_h(1.0 / 16));
  REQUIRE(est.per_horizon.size() == 3);
  CHECK(est.cauchy_gaps.size() == 2);
  const double m = 12.0;
  CHECK(hausdorff(est.d_est, disc(1.5)) <= est.normalized_slack() + std::sqrt(2.0) / m);
  // exact picture: ball(m c) + Y, so the hull is within sqrt(2)/m of the ball plus lattice error
  CHECK(hausdorff(est.d_est, disc(1.5)) <= (std::sqrt(2.0) + 2.0 / 16) / m);
}

TEST_CASE("limit shape bounds") {
  SUBCASE("2D periodic") {
    Environment env(periodic_2d());
    const auto est = estimate_limit_shape(env, {5, 10, 20}, opts_h(1.0 / 8));
    for (std::size_t i = 0; i < est.schedule.size(); ++i) {
      const double m = static_cast<double>(est.schedule[i]);
      const double sl = est.slack.at(m) / m;
      CHECK(est.inner_radius[i] >= env.alpha() - sl);
      CHECK(est.outer_radius[i] <= env.beta() + std::sqrt(2.0) / m + sl);
    }
  }
  SUBCASE("1D random time") {
    Environment env(random_time_1d(4));
    const auto est = estimate_limit_shape(env, {20, 40, 80}, opts_h(1.0 / 256));
    const double sl = est.normalized_slack();
    CHECK(est.inner_radius.back() >= env.alpha() - sl);
    CHECK(est.outer_radius.back() <= env.beta() + 1.0 / 80 + sl);
  }
}

TEST_CASE("1D autonomous limit shape matches the harmonic mean") {
  Environment env(sine_1d());
  const auto est = estimate_limit_shape(env, {25, 50, 100, 200}, opts_h(1.0 / 1024));
  CHECK(std::abs(est.d_est.support(Vec{1.0}) - kSqrt3) <= 0.02 * kSqrt3);
  CHECK(std::abs(est.d_est.support(Vec{-1.0}) - kSqrt3) <= 0.02 * kSqrt3);
  // gaps shrink along the schedule
  CHECK(est.cauchy_gaps.back() * 2.0 <= est.cauchy_gaps.front());
}

TEST_CASE("normalized hull scaling inequality") {
  Environment env(periodic_2d());
  const ReachResult r = reach_enlarged(env, 0.0, 10.0, opts_h(1.0 / 16));
  const Polytope co = convex_hull(r.set);
  for (double t : {10.2, 10.5, 10.9}) {
    const Polytope a = co.scaled(1.0 / t);
    const Polytope b = co.scaled(1.0 / 10.0);
    CHECK(hausdorff(a, b) <= b.norm() * (1.0 - 10.0 / t) + 1e-9);
    CHECK(hausdorff(a, b) <= b.norm() / t + 1e-9);
  }
}

TEST_CASE("estimated shape is convex on its own lattice") {
  Environment env(periodic_2d());
  const double h = 1.0 / 8;
  const auto est = estimate_limit_shape(env, {10}, opts_h(h));
  const double fine = 1.0 / 64;
  CHECK(hausdorff(convex_hull(rasterize(est.d_est, fine)), est.d_est) <= fine * std::sqrt(2.0));
}

TEST_CASE("subadditivity") {
  SUBCASE("unit speed balls") {
    Environment env(constant_spec(2, 1.0));
    const double h = 1.0 / 32;
    const auto rep = check_subadditivity(env, 2, 1, opts_h(h));
    CHECK(rep.excess <= h);
  }
  SUBCASE("2D periodic") {
    Environment env(periodic_2d());
    const auto rep = check_subadditivity(env, 8, 3, opts_h(1.0 / 16));
    CHECK(rep.excess <= 2.0 * rep.slack);
  }
  SUBCASE("random time seeds") {
    for (std::uint64_t seed : {1, 2, 3}) {
      Environment env(random_time_1d(seed));
      const auto rep = check_subadditivity(env, 10, 4, opts_h(1.0 / 128));
      CHECK(rep.excess <= 2.0 * rep.slack);
    }
  }
  CHECK_THROWS_AS(check_subadditivity(Environment(sine_1d()), 3, 3, opts_h(0.1)), Error);
}

TEST_CASE("uniform convergence report") {
  SUBCASE("constant speed") {
    Environment env(constant_spec(2, 1.0));
    const double h = 1.0 / 16;
    const auto xs = cell_samples(2, 2);
    const auto rows = uniform_convergence_report(env, disc(1.0), {4.0, 8.0}, xs, opts_h(h));
    for (const auto& row : rows) {
      REQUIRE(row.rho.size() == 4);
      // R_t(x)/t = ball(x/t, 1), at distance |x|/t from D
      const auto r = reach(env, Vec{}, 0.0, row.t, opts_h(h));
      for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(std::abs(row.rho[i] - xs[i].norm() / row.t) <= (r.slack.at(row.t) + 2.0 * h) / row.t + 1e-3);
      }
    }
  }
  SUBCASE("1D autonomous against the oracle interval") {
    Environment env(sine_1d());
    const Polytope oracle = Polytope::hull(1, {Vec{-kSqrt3}, Vec{kSqrt3}});
    const auto rows = uniform_convergence_report(env, oracle, {25.0, 100.0}, cell_samples(1, 9), opts_h(1.0 / 512));
    CHECK(rows[1].sup_rho <= rows[0].sup_rho);
    CHECK(rows[1].sup_rho <= 0.03);
  }
}

TEST_CASE("sandwich inclusions") {
  Environment env(sine_cos_1d());
  for (const Vec& x : cell_samples(1, 3)) {
    const auto rep = sandwich_check(env, x, 8, opts_h(1.0 / 128));
    CHECK(rep.lower_excess <= rep.slack);
    CHECK(rep.upper_excess <= rep.slack);
  }
}

TEST_CASE("cell samples") {
  const auto s = cell_samples(2, 3);
  CHECK(s.size() == 9);
  for (const Vec& x : s) {
    CHECK(x[0] > 0.0);
    CHECK(x[1] < 1.0);
  }
}

TEST_CASE("seed study") {
  const auto st = estimate_over_seeds(random_time_1d(0), {1, 2, 3}, {20, 40}, opts_h(1.0 / 128));
  REQUIRE(st.estimates.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(st.pairwise[i][i] == 0.0);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(st.pairwise[i][j] == st.pairwise[j][i]);
      CHECK(st.pairwise[i][j] < 1.5);  // both lie in [-beta, beta], with beta - alpha = 1.5
    }
  }
}

TEST_CASE("parallel_for") {
  std::vector<int> hits(103, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4);
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(
                      10, [](std::size_t i) {
                        if (i == 7) fail(ErrorKind::InvalidArgument, "boom");
                      },
                      3),
                  Error);
}
