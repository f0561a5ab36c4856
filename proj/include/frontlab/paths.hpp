#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "frontlab/environment.hpp"
#include "frontlab/geometry.hpp"

namespace frontlab {

struct PathKnot {
  double t = 0.0;
  Vec x;
};

/// Piecewise-linear curve through time-ordered knots. A single knot is a
/// constant path at one instant.
struct AdmissiblePath {
  int dim = 1;
  std::vector<PathKnot> knots;
  std::uint64_t env_fingerprint = 0;
  double tolerance = 0.0;  // claimed bound on worst |gamma' - b| / a - 1

  [[nodiscard]] double start_time() const { return knots.front().t; }
  [[nodiscard]] double end_time() const { return knots.back().t; }
  [[nodiscard]] Vec at(double t) const;
  [[nodiscard]] Vec end_point() const { return knots.back().x; }

  /// Appends `next`, whose first knot must coincide with this path's last.
  void append(const AdmissiblePath& next);
  void dump_csv(std::ostream& out) const;
};

struct PathReport {
  bool valid = false;
  double worst_ratio = 0.0;
  std::size_t worst_segment = 0;
};

/// Samples every segment at `samples` interior and end points and compares
/// |gamma' - b(gamma, r)| with a(gamma, r).
PathReport validate_path(const Environment& env, const AdmissiblePath& path, int samples = 16);

/// Bridge duration [sqrt(n)/alpha] + 1.
long bridge_length(int dim, double alpha);

/// Straight run at speed alpha from y1 to y2 starting at `start`, then waiting
/// until start + bridge_length. Requires an environment without drift.
AdmissiblePath bridge(const Environment& env, const Vec& y1, const Vec& y2, double start);

struct RotationResult {
  double right = 0.0;  // gamma_R(T), gamma_R' = a(gamma_R, t)
  double left = 0.0;   // gamma_L(T), gamma_L' = -a(gamma_L, t)
};

/// Classical RK4 for both extremal 1D trajectories from x on [0, T].
RotationResult integrate_rotation_1d(const Environment& env, double x, double T, double step = 1e-3);

struct RealizeOptions {
  double h = 1.0 / 64;
  double dt = 0.0;       // 0 selects the reach default
  long max_denominator = 10000;
};

struct RealizeReport {
  AdmissiblePath path;
  double endpoint_error = 0.0;  // |gamma(k)/k - q|
  long blocks = 0;              // number of m-blocks used
  long denominator = 0;         // common denominator of the rational weights
  std::vector<long> repetitions;  // per Caratheodory vertex
  std::vector<WeightedVertex> decomposition;
  std::vector<double> block_start_times;  // gamma is integral there (start point 0)
};

/// Realizes q in D by concatenating reach-extracted sub-paths of horizon m
/// toward the Caratheodory vertices of q, joined by bridges.
RealizeReport construct_realizing_path(const Environment& env, const Vec& q, long k, long m, const Polytope& d_est,
                                       double tol, const RealizeOptions& opts = {});

}  // namespace frontlab
