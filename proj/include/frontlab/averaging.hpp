#pragma once

#include <cstdint>
#include <vector>

#include "frontlab/environment.hpp"
#include "frontlab/geometry.hpp"
#include "frontlab/reachable.hpp"

namespace frontlab {

/// Normalized hulls co R_m(Y)/m along a schedule of horizons.
struct LimitShapeEstimate {
  Polytope d_est;  // hull at the largest horizon
  std::vector<long> schedule;
  std::vector<Polytope> per_horizon;
  std::vector<double> cauchy_gaps;    // rho between consecutive normalized hulls
  std::vector<double> inner_radius;   // largest r with ball(0, r) inside the hull
  std::vector<double> outer_radius;   // sup |q| over the hull
  SlackModel slack;

  /// delta(m_max) / m_max, the slack carried into normalized units.
  [[nodiscard]] double normalized_slack() const;
};

/// One enlarged reach to the largest horizon; smaller horizons are read off
/// the arrival times of the same computation.
LimitShapeEstimate estimate_limit_shape(const Environment& env, const std::vector<long>& schedule,
                                        const ReachOptions& opts);

struct SubadditivityReport {
  long m = 0;
  long k = 0;
  double excess = 0.0;  // sup over R_m(Y) of the distance to R_k(Y) + R_{m-k}(Y)(tau_k) + Y~
  double slack = 0.0;   // delta(m)
};

SubadditivityReport check_subadditivity(const Environment& env, long m, long k, const ReachOptions& opts);

struct UniformRow {
  double t = 0.0;
  double sup_rho = 0.0;
  std::vector<double> rho;  // per sample
};

/// rho(R_t(x)/t, D) for each horizon and sample. One reach per sample serves
/// every horizon.
std::vector<UniformRow> uniform_convergence_report(const Environment& env, const Polytope& d_est,
                                                   const std::vector<double>& times, const std::vector<Vec>& samples,
                                                   const ReachOptions& opts);

/// Evenly spread samples of [0,1)^n, `per_axis` per coordinate.
std::vector<Vec> cell_samples(int dim, int per_axis);

struct SandwichReport {
  double lower_excess = 0.0;  // sup over R_{t-l}(Y)(tau_l) of d(., R_t(x))
  double upper_excess = 0.0;  // sup over R_t(x) of d(., R_t(Y))
  double slack = 0.0;
};

/// R_{t-l}(Y)(tau_l) in R_t(x) in R_t(Y) for x in Y, l the bridge length.
SandwichReport sandwich_check(const Environment& env, const Vec& x, long t, const ReachOptions& opts);

struct SeedStudy {
  std::vector<std::uint64_t> seeds;
  std::vector<LimitShapeEstimate> estimates;
  std::vector<std::vector<double>> pairwise;  // rho between per-seed D_est
};

SeedStudy estimate_over_seeds(const EnvironmentSpec& spec, const std::vector<std::uint64_t>& seeds,
                              const std::vector<long>& schedule, const ReachOptions& opts);

}  // namespace frontlab
