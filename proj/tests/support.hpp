#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "frontlab/environment.hpp"

namespace frontlab::testing {

inline EnvironmentSpec constant_spec(int dim, double c) {
  EnvironmentSpec s;
  s.dimension = dim;
  s.alpha = c;
  s.beta = c;
  return s;
}

// a(x) = 2 + sin(2 pi x)
inline EnvironmentSpec sine_1d() {
  EnvironmentSpec s;
  s.dimension = 1;
  s.alpha = 1.0;
  s.beta = 3.0;
  s.modes.push_back({{1, 0, 0}, 1.0, 0.0, 0, 0.0});
  return s;
}

// a(x,t) = 2 + sin(2 pi x) cos(2 pi t)
inline EnvironmentSpec sine_cos_1d() {
  EnvironmentSpec s = sine_1d();
  s.modes[0].time_freq = 1;
  return s;
}

inline EnvironmentSpec periodic_2d() {
  EnvironmentSpec s;
  s.dimension = 2;
  s.alpha = 1.0;
  s.beta = 2.0;
  s.modes.push_back({{1, 0, 0}, 0.5, 0.3, 1, 0.0});
  s.modes.push_back({{1, 1, 0}, 0.3, 1.1, 1, 0.7});
  s.modes.push_back({{0, 2, 0}, 0.2, -0.4, 0, 0.0});
  return s;
}

inline EnvironmentSpec random_time_1d(std::uint64_t seed) {
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

/// Classical RK4 for x' = sign * a(x, t), independent of the library integrator.
template <class Speed>
double rk4_front(Speed a, double x, double T, double step, double sign) {
  const long n = static_cast<long>(std::ceil(T / step));
  const double dt = T / static_cast<double>(n);
  for (long i = 0; i < n; ++i) {
    const double t = dt * static_cast<double>(i);
    const double k1 = sign * a(x, t);
    const double k2 = sign * a(x + 0.5 * dt * k1, t + 0.5 * dt);
    const double k3 = sign * a(x + 0.5 * dt * k2, t + 0.5 * dt);
    const double k4 = sign * a(x + dt * k3, t + dt);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

inline double sine_speed(double x, double) { return 2.0 + std::sin(2.0 * std::numbers::pi * x); }
inline double sine_cos_speed(double x, double t) {
  return 2.0 + std::sin(2.0 * std::numbers::pi * x) * std::cos(2.0 * std::numbers::pi * t);
}

}  // namespace frontlab::testing
