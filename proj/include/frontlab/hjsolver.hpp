#pragma once

#include <functional>
#include <vector>

#include "frontlab/effective.hpp"
#include "frontlab/environment.hpp"
#include "frontlab/field.hpp"

namespace frontlab {

/// u_t + a(x/eps, t/eps)|Du| + b(x/eps, t/eps).Du = 0 on the box [lo, hi].
struct SolverConfig {
  double eps = 1.0;
  double h = 1.0 / 64;  // finite-difference spacing
  Vec lo;
  Vec hi;
  double T = 1.0;
  double dt = 0.0;                    // 0 selects the CFL limit
  std::vector<double> output_times;   // empty means {T}
  double control_h = 1.0 / 512;       // reach lattice spacing in fast units (x/eps)
};

/// h / (n (beta + sup|b|)).
double cfl_limit(const Environment& env, double h);

/// Explicit Euler with the Rouy-Tourin upwind gradient and per-component
/// upwinded drift. The box is padded by (beta + sup|b|) T with constant
/// extrapolation beyond the padding.
ScalarField solve_oscillatory_fd(const Environment& env, const SolverConfig& cfg, const SpaceFunction& u0);

struct SpaceTimePoint {
  Vec x;
  double t = 0.0;
};

/// u(x,t) = min { u0(y) : x/eps in R_{t/eps}(y/eps) }, with the candidate set
/// obtained as a backward reach from x/eps.
std::vector<double> solve_by_control(const Environment& env, const SolverConfig& cfg, const SpaceFunction& u0,
                                     const std::vector<SpaceTimePoint>& points);

/// The environment's time plays the role of x_{n+1}.
struct NoncoercivePoint {
  Vec x;
  double xn1 = 0.0;
  double t = 0.0;
};
using SpaceTimeFunction = std::function<double(const Vec&, double)>;

/// v(x, x_{n+1}, t) = min { v0(y, x_{n+1} - t) : x/eps in R_{x_{n+1}/eps}(y/eps, (x_{n+1} - t)/eps) }.
std::vector<double> solve_noncoercive(const Environment& env, const SolverConfig& cfg, const SpaceTimeFunction& v0,
                                      const std::vector<NoncoercivePoint>& points);

struct TrendRow {
  double eps = 0.0;
  double error = 0.0;  // sup over the sample grid of |u^eps - u_bar|
};

/// E(eps) for each eps, with u^eps from solve_by_control and u_bar from
/// solve_homogenized, both on `grid` at `times`.
std::vector<TrendRow> homogenization_trend(const Environment& env, const EffectiveModel& model,
                                           const SpaceFunction& u0, const std::vector<double>& eps_list,
                                           const SpaceGrid& grid, const std::vector<double>& times,
                                           const SolverConfig& base);

}  // namespace frontlab
