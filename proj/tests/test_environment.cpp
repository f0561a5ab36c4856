#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "frontlab/environment.hpp"
#include "frontlab/error.hpp"

using namespace frontlab;

namespace {

EnvironmentSpec autonomous_1d() {
  EnvironmentSpec s;
  s.dimension = 1;
  s.alpha = 1.0;
  s.beta = 3.0;
  s.modes.push_back({{1, 0, 0}, 1.0, 0.0, 0, 0.0});
  return s;
}

EnvironmentSpec periodic_2d() {
  EnvironmentSpec s;
  s.dimension = 2;
  s.alpha = 1.0;
  s.beta = 2.0;
  s.modes.push_back({{1, 0, 0}, 0.5, 0.3, 1, 0.0});
  s.modes.push_back({{1, 1, 0}, 0.3, 1.1, 1, 0.7});
  s.modes.push_back({{0, 2, 0}, 0.2, -0.4, 0, 0.0});
  return s;
}

EnvironmentSpec random_1d(std::uint64_t seed) {
  EnvironmentSpec s;
  s.dimension = 1;
  s.kind = EnvironmentKind::RandomTime;
  s.alpha = 1.0;
  s.beta = 2.5;
  s.seed = seed;
  s.modes.push_back({{1, 0, 0}, 0.6, 0.0, 0, 0.0});
  s.modes.push_back({{2, 0, 0}, 0.4, 0.9, 0, 0.0});
  return s;
}

}  // namespace

TEST_CASE("speed formula at known points") {
  Environment env(autonomous_1d());
  CHECK(env.speed(Vec{0.25}, 0.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(env.speed(Vec{0.25}, 17.3) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(env.speed(Vec{0.75}, 0.0) == doctest::Approx(1.0).epsilon(1e-15));

  // a(x,t) = 2 + sin(2 pi x) cos(2 pi t)
  EnvironmentSpec s = autonomous_1d();
  s.modes[0].time_freq = 1;
  Environment tenv(s);
  CHECK(tenv.speed(Vec{0.0}, 0.0) == doctest::Approx(2.0));
  CHECK(tenv.speed(Vec{0.25}, 0.5) == doctest::Approx(1.0));
  CHECK(eval_velocity(tenv, Vec{0.1}, 0.2) ==
        doctest::Approx(2.0 + std::sin(0.2 * std::numbers::pi) * std::cos(0.4 * std::numbers::pi)));
}

TEST_CASE("invalid specs are rejected") {
  auto expect_invalid = [](const EnvironmentSpec& s) {
    try {
      Environment e(s);
      FAIL("expected invalid-spec");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidSpec);
    }
  };
  EnvironmentSpec s = autonomous_1d();
  s.alpha = 0.0;
  expect_invalid(s);
  s = autonomous_1d();
  s.beta = 0.5;
  expect_invalid(s);
  s = autonomous_1d();
  s.modes.push_back({{2, 0, 0}, 0.5, 0.0, 0, 0.0});
  expect_invalid(s);
  s = autonomous_1d();
  s.modes[0].freq = {1, 1, 0};
  expect_invalid(s);
  s = autonomous_1d();
  s.drift = DriftSpec{Vec{0.8}, {}, 0.5};
  expect_invalid(s);
  s.drift = DriftSpec{Vec{0.4}, {}, 0.5};
  CHECK_NOTHROW(Environment{s});
}

TEST_CASE("bounds, periodicity and Lipschitz constants") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  for (const auto& spec : {autonomous_1d(), periodic_2d(), random_1d(3)}) {
    Environment env(spec);
    const int n = env.dim();
    for (int k = 0; k < 1000; ++k) {
      Vec x;
      for (int i = 0; i < n; ++i) x[i] = U(rng);
      const double t = U(rng);
      const double a = env.speed(x, t);
      CHECK(a >= env.alpha());
      CHECK(a <= env.beta());
      for (int i = 0; i < n; ++i) {
        Vec y = x + Vec::unit(i) * 3.0;
        CHECK(std::abs(env.speed(y, t) - a) <= 1e-12);
      }
    }
    const double d = 1e-3;
    for (int k = 0; k < 300; ++k) {
      Vec x;
      for (int i = 0; i < n; ++i) x[i] = U(rng);
      const double t = U(rng);
      for (int i = 0; i < n; ++i) {
        const double slope = std::abs(env.speed(x + Vec::unit(i) * d, t) - env.speed(x, t)) / d;
        CHECK(slope <= env.lipschitz_x() * 1.01 + 1e-12);
      }
      const double tslope = std::abs(env.speed(x, t + d) - env.speed(x, t)) / d;
      CHECK(tslope <= env.lipschitz_t() * 1.01 + 1e-12);
    }
  }
}

TEST_CASE("time shift acts as an index shift") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-4.0, 4.0);
  for (const auto& spec : {periodic_2d(), random_1d(7)}) {
    Environment env(spec);
    const int n = env.dim();
    Environment id = shift_time(env, 0);
    for (int k = -3; k <= 3; ++k) {
      Environment sh = shift_time(env, k);
      Environment twice = shift_time(shift_time(env, 2), k - 2);
      for (int j = 0; j < 50; ++j) {
        Vec x;
        for (int i = 0; i < n; ++i) x[i] = U(rng);
        const double t = U(rng);
        CHECK(sh.speed(x, t) == doctest::Approx(env.speed(x, t + k)).epsilon(1e-12));
        CHECK(twice.speed(x, t) == sh.speed(x, t));
        CHECK(id.speed(x, t) == env.speed(x, t));
      }
    }
  }
}

TEST_CASE("random-time environments are reproducible and seed dependent") {
  Environment a(random_1d(7));
  Environment b(random_1d(7));
  Environment c(random_1d(8));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-10.0, 10.0);
  int differ = 0;
  for (int k = 0; k < 100; ++k) {
    const Vec x{U(rng)};
    const double t = U(rng);
    CHECK(a.speed(x, t) == b.speed(x, t));
    differ += a.speed(x, t) != c.speed(x, t) ? 1 : 0;
  }
  CHECK(differ > 90);

  // coefficient law: mean near 0, variance near 1/3, range [-1,1]
  double m = 0.0;
  double v = 0.0;
  const int N = 20000;
  for (int k = 0; k < N; ++k) {
    const double c = random_coefficient(99, 0, k);
    CHECK(std::abs(c) <= 1.0);
    m += c;
    v += c * c;
  }
  m /= N;
  v /= N;
  CHECK(std::abs(m) < 0.02);
  CHECK(std::abs(v - 1.0 / 3.0) < 0.02);
}

TEST_CASE("time reversal and drift") {
  EnvironmentSpec s = periodic_2d();
  s.drift = DriftSpec{Vec{0.1, -0.2}, {{{1, 0, 0}, Vec{0.1, 0.05}, 0.2, 1, 0.0}}, 0.5};
  Environment env(s);
  Environment rev = env.time_reversed(4.0);
  const Vec x{0.3, 0.7};
  CHECK(rev.speed(x, 1.25) == doctest::Approx(env.speed(x, 2.75)));
  const Vec b = env.drift(x, 2.75);
  const Vec rb = rev.drift(x, 1.25);
  CHECK(rb[0] == doctest::Approx(-b[0]));
  CHECK(rb[1] == doctest::Approx(-b[1]));
  CHECK(env.drift_bound() <= env.alpha() - 0.5);
  CHECK(env.min_progress() == doctest::Approx(env.alpha() - env.drift_bound()));
  CHECK_FALSE(env.is_autonomous());
  CHECK(Environment(autonomous_1d()).is_autonomous());
}

TEST_CASE("config round trip") {
  EnvironmentSpec s = periodic_2d();
  s.seed = 42;
  s.drift = DriftSpec{Vec{0.1, -0.2}, {{{1, 0, 0}, Vec{0.1, 0.05}, 0.2, 1, 0.0}}, 0.5};
  const std::string text = to_config_text(s);
  const EnvironmentSpec back = parse_environment(ConfigFile::parse(text));
  CHECK(to_config_text(back) == text);
  CHECK(Environment(back).fingerprint() == Environment(s).fingerprint());
  CHECK(Environment(s).shifted(1).fingerprint() != Environment(s).fingerprint());

  const auto cfg = ConfigFile::parse(
      "[environment]\n"
      "dimension = 1\n"
      "kind = periodic\n"
      "alpha = 1\n"
      "beta = 3\n"
      "mode = 1 | 1.0\n");
  Environment e(parse_environment(cfg));
  CHECK(e.speed(Vec{0.25}, 0.0) == doctest::Approx(3.0));

  CHECK_THROWS_AS(parse_environment(ConfigFile::parse("[environment]\nalpha = 1\nbeta = 2\nbogus = 1\n")), Error);
  CHECK_THROWS_AS(parse_environment(ConfigFile::parse("[environment]\nalpha = x\nbeta = 2\n")), Error);
}
