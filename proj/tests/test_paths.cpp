#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "frontlab/error.hpp"
#include "frontlab/paths.hpp"
#include "frontlab/reachable.hpp"
#include "support.hpp"

using namespace frontlab;
using namespace frontlab::testing;

namespace {

AdmissiblePath line(int dim, const Vec& from, const Vec& velocity, double T) {
  AdmissiblePath p;
  p.dim = dim;
  p.knots = {{0.0, from}, {T, from + velocity * T}};
  return p;
}

}  // namespace

TEST_CASE("validate_path") {
  Environment env(periodic_2d());
  const auto ok = validate_path(env, line(2, Vec{0.1, 0.2}, Vec{0.6, -0.8}, 3.0));
  CHECK(ok.valid);
  CHECK(ok.worst_ratio <= 1.0);

  Environment flat(constant_spec(1, 2.0));
  const auto bad = validate_path(flat, line(1, Vec{0.0}, Vec{2.1}, 1.0));
  CHECK_FALSE(bad.valid);
  CHECK(bad.worst_ratio == doctest::Approx(1.05));

  AdmissiblePath z;
  z.dim = 1;
  z.knots = {{1.0, Vec{0.0}}, {1.0, Vec{0.5}}};
  CHECK_THROWS_AS(validate_path(flat, z), Error);

  AdmissiblePath single;
  single.knots = {{0.0, Vec{0.0}}};
  CHECK(validate_path(flat, single).valid);
}

TEST_CASE("path interpolation and csv") {
  AdmissiblePath p = line(1, Vec{1.0}, Vec{2.0}, 2.0);
  CHECK(p.at(0.5)[0] == doctest::Approx(2.0));
  CHECK(p.at(-1.0)[0] == 1.0);
  CHECK(p.at(9.0)[0] == 5.0);
  std::ostringstream os;
  p.dump_csv(os);
  CHECK(os.str() == "t,x1\n0,1\n2,5\n");
}

TEST_CASE("bridge lengths and shape") {
  CHECK(bridge_length(1, 1.0) == 2);
  CHECK(bridge_length(2, 0.5) == 3);
  CHECK(bridge_length(3, 1.0) == 2);

  Environment env(constant_spec(1, 1.0));
  const auto b = bridge(env, Vec{0.0}, Vec{1.0}, 4.0);
  CHECK(b.start_time() == 4.0);
  CHECK(b.end_time() == 6.0);
  CHECK(b.at(5.0)[0] == doctest::Approx(1.0));
  CHECK(b.at(5.5)[0] == doctest::Approx(1.0));
  CHECK(validate_path(env, b).valid);

  const auto c = bridge(env, Vec{0.3}, Vec{0.3}, 0.0);
  CHECK(c.knots.size() == 2);
  CHECK(c.at(1.0)[0] == 0.3);

  Environment env2(periodic_2d());
  const auto b2 = bridge(env2, Vec{0.0, 0.0}, Vec{1.0, 1.0}, 2.0);
  CHECK(b2.end_time() == doctest::Approx(2.0 + bridge_length(2, 1.0)));
  const auto rep = validate_path(env2, b2);
  CHECK(rep.valid);
  CHECK(rep.worst_ratio <= 1.0);
}

TEST_CASE("rotation integration") {
  SUBCASE("constant speed") {
    Environment env(constant_spec(1, 1.5));
    const auto r = integrate_rotation_1d(env, 0.25, 4.0);
    CHECK(r.right == doctest::Approx(6.25).epsilon(1e-12));
    CHECK(r.left == doctest::Approx(-5.75).epsilon(1e-12));
  }
  SUBCASE("harmonic mean speed") {
    Environment env(sine_1d());
    const auto r = integrate_rotation_1d(env, 0.0, 200.0);
    CHECK(std::abs(r.right / 200.0 - std::sqrt(3.0)) <= 0.01 * std::sqrt(3.0));
    CHECK(std::abs(r.left / 200.0 + std::sqrt(3.0)) <= 0.01 * std::sqrt(3.0));
    CHECK(r.right == doctest::Approx(rk4_front(sine_speed, 0.0, 200.0, 1e-4, 1.0)).epsilon(1e-8));
  }
  SUBCASE("step halving") {
    Environment env(sine_cos_1d());
    const auto a = integrate_rotation_1d(env, 0.1, 100.0, 1e-3);
    const auto b = integrate_rotation_1d(env, 0.1, 100.0, 5e-4);
    CHECK(std::abs(a.right - b.right) < 1e-6);
    CHECK(std::abs(a.left - b.left) < 1e-6);
  }
  SUBCASE("extremal trajectories bound the reachable set") {
    Environment env(sine_cos_1d());
    ReachOptions o;
    o.h = 1.0 / 256;
    const auto res = reach(env, Vec{0.1}, 0.0, 5.0, o);
    const auto r = integrate_rotation_1d(env, 0.1, 5.0);
    const double slack = res.slack.at(5.0);
    CHECK(res.set.max_coord(0) <= r.right + slack);
    CHECK(res.set.min_coord(0) >= r.left - slack);
    CHECK(std::abs(res.set.max_coord(0) - r.right) <= slack);
  }
  SUBCASE("drift or dimension rejected") {
    Environment env(periodic_2d());
    CHECK_THROWS_AS(integrate_rotation_1d(env, 0.0, 1.0), Error);
  }
}

TEST_CASE("realizing paths in the 1D autonomous medium") {
  Environment env(sine_1d());
  const double s3 = std::sqrt(3.0);
  const Polytope d = Polytope::hull(1, {Vec{-s3}, Vec{s3}});
  for (double q : {0.0, 0.9 * s3, -0.5 * s3}) {
    CAPTURE(q);
    const auto rep = construct_realizing_path(env, Vec{q}, 400, 50, d, 0.05);
    CHECK(rep.endpoint_error <= 0.05);
    CHECK(rep.path.start_time() == 0.0);
    CHECK(rep.path.end_time() == doctest::Approx(400.0));
    const auto v = validate_path(env, rep.path);
    CHECK(v.valid);
    CHECK(v.worst_ratio <= 1.0 + env.lipschitz() * env.beta() * default_time_step(env, 1.0 / 64) + 1e-9);
    long sum = 0;
    for (long r : rep.repetitions) sum += r;
    CHECK(sum == rep.blocks);
    // block starts sit on integer points (start point 0)
    for (double s : rep.block_start_times) {
      const Vec x = rep.path.at(s);
      CHECK(x[0] == std::round(x[0]));
    }
  }
}

TEST_CASE("realizing paths with constant speed") {
  Environment env(constant_spec(2, 1.0));
  std::vector<Vec> ring;
  for (int i = 0; i < 64; ++i) {
    const double th = 2.0 * std::numbers::pi * i / 64;
    ring.push_back(Vec{std::cos(th), std::sin(th)});
  }
  const Polytope d = Polytope::hull(2, ring);
  const double tol = 0.05;
  const Vec q = Vec{0.6, 0.8} * (1.0 - tol);
  RealizeOptions o;
  o.h = 1.0 / 16;
  const auto rep = construct_realizing_path(env, q, 60, 10, d, tol, o);
  CHECK(rep.endpoint_error <= tol);
  CHECK(validate_path(env, rep.path).valid);
}

TEST_CASE("realizing a point outside D fails") {
  Environment env(sine_1d());
  const Polytope d = Polytope::hull(1, {Vec{-1.0}, Vec{1.0}});
  try {
    (void)construct_realizing_path(env, Vec{2.0}, 100, 20, d, 0.05);
    FAIL("expected not-in-hull");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInHull);
  }
}
