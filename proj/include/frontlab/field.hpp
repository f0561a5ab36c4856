#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "frontlab/geometry.hpp"
#include "frontlab/vec.hpp"

namespace frontlab {

/// Regular node grid lo + i*h, i in [0, count) per axis; axis 0 fastest.
struct SpaceGrid {
  int dim = 1;
  double h = 1.0;
  Vec lo;
  Index count{1, 1, 1};

  /// Nodes covering [lo, hi] (hi rounded up to the lattice).
  static SpaceGrid covering(int dim, double h, const Vec& lo, const Vec& hi);

  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] Vec point(std::size_t k) const;
  [[nodiscard]] Index index_of(std::size_t k) const;
  [[nodiscard]] std::size_t linear(const Index& i) const;
};

using SpaceFunction = std::function<double(const Vec&)>;

/// Samples on a SpaceGrid at a list of times; values[ti * grid.size() + k].
struct ScalarField {
  SpaceGrid grid;
  std::vector<double> times;
  std::vector<double> values;

  [[nodiscard]] double at(std::size_t ti, std::size_t k) const { return values[ti * grid.size() + k]; }
  /// Multilinear in space at a stored time index.
  [[nodiscard]] double interpolate(std::size_t ti, const Vec& x) const;
  /// Index of a stored time (within 1e-12), or throws invalid-argument.
  [[nodiscard]] std::size_t time_index(double t) const;
  /// CSV with columns x1..xn,t,value.
  void dump_csv(std::ostream& out) const;
};

}  // namespace frontlab
