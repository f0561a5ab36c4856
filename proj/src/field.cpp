#include "frontlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "frontlab/config.hpp"
#include "frontlab/error.hpp"

namespace frontlab {

SpaceGrid SpaceGrid::covering(int dim, double h, const Vec& lo, const Vec& hi) {
  require(dim >= 1 && dim <= kMaxDim, ErrorKind::InvalidArgument, "dimension must be 1..3");
  require(h > 0.0, ErrorKind::InvalidArgument, "grid spacing must be positive");
  SpaceGrid g;
  g.dim = dim;
  g.h = h;
  g.lo = lo;
  for (int a = 0; a < dim; ++a) {
    require(hi[a] >= lo[a], ErrorKind::InvalidArgument, "empty grid box");
    g.count[static_cast<std::size_t>(a)] = static_cast<long>(std::ceil((hi[a] - lo[a]) / h - 1e-9)) + 1;
  }
  return g;
}

std::size_t SpaceGrid::size() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(count[static_cast<std::size_t>(a)]);
  return n;
}

Index SpaceGrid::index_of(std::size_t k) const {
  Index i{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    const auto c = static_cast<std::size_t>(count[static_cast<std::size_t>(a)]);
    i[static_cast<std::size_t>(a)] = static_cast<long>(k % c);
    k /= c;
  }
  return i;
}

std::size_t SpaceGrid::linear(const Index& i) const {
  std::size_t k = 0;
  for (int a = dim - 1; a >= 0; --a) {
    k = k * static_cast<std::size_t>(count[static_cast<std::size_t>(a)]) + static_cast<std::size_t>(i[static_cast<std::size_t>(a)]);
  }
  return k;
}

Vec SpaceGrid::point(std::size_t k) const {
  const Index i = index_of(k);
  Vec x = lo;
  for (int a = 0; a < dim; ++a) x[a] += h * static_cast<double>(i[static_cast<std::size_t>(a)]);
  return x;
}

double ScalarField::interpolate(std::size_t ti, const Vec& x) const {
  require(ti < times.size(), ErrorKind::InvalidArgument, "time index out of range");
  const int dim = grid.dim;
  Index base{0, 0, 0};
  double w[kMaxDim] = {0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) {
    const auto u = static_cast<std::size_t>(a);
    const double s = (x[a] - grid.lo[a]) / grid.h;
    const long top = grid.count[u] - 1;
    if (s < -1e-9 || s > static_cast<double>(top) + 1e-9) fail(ErrorKind::InvalidArgument, "point outside the field grid");
    long b = std::clamp(static_cast<long>(std::floor(s)), 0L, std::max(0L, top - 1));
    base[u] = b;
    w[a] = top == 0 ? 0.0 : std::clamp(s - static_cast<double>(b), 0.0, 1.0);
  }
  double out = 0.0;
  for (int corner = 0; corner < (1 << dim); ++corner) {
    Index i = base;
    double weight = 1.0;
    for (int a = 0; a < dim; ++a) {
      const auto u = static_cast<std::size_t>(a);
      const bool up = (corner >> a) & 1;
      if (up && grid.count[u] == 1) {
        weight = 0.0;
        break;
      }
      i[u] += up ? 1 : 0;
      weight *= up ? w[a] : 1.0 - w[a];
    }
    if (weight != 0.0) out += weight * at(ti, grid.linear(i));
  }
  return out;
}

std::size_t ScalarField::time_index(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return i;
  }
  fail(ErrorKind::InvalidArgument, "time " + format_double(t) + " is not stored in the field");
}

void ScalarField::dump_csv(std::ostream& out) const {
  for (int a = 0; a < grid.dim; ++a) out << 'x' << (a + 1) << ',';
  out << "t,value\n";
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Vec x = grid.point(k);
      for (int a = 0; a < grid.dim; ++a) out << format_double(x[a]) << ',';
      out << format_double(times[ti]) << ',' << format_double(at(ti, k)) << '\n';
    }
  }
}

}  // namespace frontlab
