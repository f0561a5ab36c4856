#include "frontlab/effective.hpp"

#include <algorithm>
#include <cmath>

#include "frontlab/error.hpp"

namespace frontlab {

double effective_hamiltonian(const EffectiveModel& model, const Vec& p) { return support_function(model.d, p); }

double effective_lagrangian(const EffectiveModel& model, const Vec& q) {
  return model.d.signed_distance(q) <= model.band ? 0.0 : std::numeric_limits<double>::infinity();
}

ScalarField solve_homogenized(const EffectiveModel& model, const SpaceFunction& u0, const SpaceGrid& grid,
                              const std::vector<double>& times, double window) {
  require(model.d.dim() == grid.dim, ErrorKind::InvalidArgument, "dimension mismatch");
  ScalarField f;
  f.grid = grid;
  f.times = times;
  f.values.resize(times.size() * grid.size());
  const std::size_t n = grid.size();
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    const double t = times[ti];
    require(t >= 0.0, ErrorKind::InvalidArgument, "negative time");
    // offsets forming -tD
    std::vector<Vec> offsets;
    if (t == 0.0) {
      offsets.push_back(Vec{});
    } else {
      std::vector<Vec> verts;
      for (const Vec& v : model.d.vertices()) verts.push_back(v * -t);
      const Polytope k = Polytope::hull(grid.dim, verts);
      for (const Vec& p : rasterize(k, grid.h).occupied_points()) {
        if (k.contains(p, 1e-9)) offsets.push_back(p);
      }
      offsets.insert(offsets.end(), k.vertices().begin(), k.vertices().end());
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Vec x = grid.point(i);
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& o : offsets) {
        const Vec y = x + o;
        if (y.norm() > window) fail(ErrorKind::WindowOverflow, "Lax-Oleinik search leaves the window");
        best = std::min(best, u0(y));
      }
      f.values[ti * n + i] = best;
    }
  }
  return f;
}

}  // namespace frontlab
