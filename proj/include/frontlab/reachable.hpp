#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "frontlab/environment.hpp"
#include "frontlab/geometry.hpp"
#include "frontlab/paths.hpp"

namespace frontlab {

/// delta(tau) = 2h + c0 * beta * dt * tau, with beta the largest progress
/// speed (beta + sup|b|) and c0 = 1 + Lip(a) + Lip(b).
struct SlackModel {
  double h = 0.0;
  double dt = 0.0;
  double beta = 0.0;
  double c0 = 1.0;
  [[nodiscard]] double at(double tau) const { return 2.0 * h + c0 * beta * dt * tau; }
};

struct ReachOptions {
  double h = 1.0 / 64;
  double dt = 0.0;  // 0 selects default_time_step
  bool record_parents = false;
  std::size_t max_cells = std::size_t{1} << 28;
};

/// 2 * sqrt(n) * h / alpha_eff, alpha_eff = alpha - sup|b|: every frozen-speed
/// step reaches beyond one lattice diagonal.
double default_time_step(const Environment& env, double h);
SlackModel slack_model(const Environment& env, double h, double dt);

/// Reachable set with arrival times. Lattice cells carry the earliest time at
/// which the discrete scheme reaches them (start cells at s); the set at any
/// time r in [s, t] is the sublevel {arrival <= r}, so one computation serves
/// every intermediate horizon.
struct ReachResult {
  GridSet set;  // sublevel at t
  GridSet start_set;
  bool from_unit_cell = false;
  Vec start;
  double s = 0.0;
  double t = 0.0;
  double h = 0.0;
  double dt = 0.0;
  std::vector<double> arrival;     // per cell of set's box, +inf when unreached
  std::vector<std::int64_t> parent;  // predecessor cell (linear index), -1 at start
  std::uint64_t env_fingerprint = 0;
  SlackModel slack;

  [[nodiscard]] bool has_parents() const { return !parent.empty(); }
  /// Occupancy at time r (s <= r <= t).
  [[nodiscard]] GridSet at(double r) const;
};

/// One explicit step: union over occupied x of the closed ball centered at
/// x + b(x,t) dt with radius a(x,t) dt.
GridSet reach_step(const Environment& env, const GridSet& g, double t, double dt);

/// Reachable set from an arbitrary rasterized start set.
ReachResult reach_from(const Environment& env, const GridSet& start, double s, double t, const ReachOptions& opts);
/// R_t(x, s).
ReachResult reach(const Environment& env, const Vec& x, double s, double t, const ReachOptions& opts);
/// R_t(Y, s), Y = [0,1]^n.
ReachResult reach_enlarged(const Environment& env, double s, double t, const ReachOptions& opts);

/// Backward set {y : x in R_t(y, s)} computed as a forward reach of the
/// time-reversed environment from x over [0, t - s]. Arrival values are
/// reversed-time.
ReachResult reach_backward(const Environment& env, const Vec& x, double s, double t, const ReachOptions& opts);

struct ConeCheck {
  double inner_excess = 0.0;  // sup over the ball(x, tau*alpha_eff) of d(., R)
  double outer_excess = 0.0;  // sup over R of d(., ball(x, tau*beta_eff) [+ Y])
  double slack = 0.0;
  [[nodiscard]] bool ok() const { return inner_excess <= slack && outer_excess <= slack; }
};

/// Cone bounds of a result, measured through distance transforms.
ConeCheck check_cone_bounds(const Environment& env, const ReachResult& r);

struct TranslateReport {
  double spatial = 0.0;   // rho(R_t(x), [x] + R_t(x^))
  double temporal = 0.0;  // rho(R_{k+t}(x, k), R_t(x) under tau_k)
};

TranslateReport translate_check(const Environment& env, const Vec& x, double t, long k, const ReachOptions& opts);

/// Minimal time theta(., x) on a lattice box for time-independent speeds:
/// Dijkstra with 8 (2D) / 26 (3D) neighbour edges weighted by length over the
/// speed at the edge midpoint.
struct TimeField {
  GridSet box;  // lattice and extent; occupancy unused
  std::vector<double> value;
  [[nodiscard]] GridSet sublevel(double t) const;
  [[nodiscard]] double at(const Vec& y) const;
};

TimeField minimal_time(const Environment& env, const Vec& x, double radius, double h);

/// Bound on |gamma' - b| / a - 1 along frozen-coefficient steps of length dt.
double discrete_path_tolerance(const Environment& env, double dt);

/// Nearest occupied cell center of g to x (linear scan).
Vec nearest_occupied(const GridSet& g, const Vec& x);

/// Backtracks parents from the cell nearest `target` to the start. The path
/// waits at the target from its arrival time until result.t.
AdmissiblePath extract_discrete_path(const Environment& env, const ReachResult& result, const Vec& target);

}  // namespace frontlab
