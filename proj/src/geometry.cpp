#include "frontlab/geometry.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "frontlab/config.hpp"
#include "frontlab/error.hpp"

namespace frontlab {

namespace {

constexpr double kFar = 1e20;

bool same_spacing(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }

double extent(const std::vector<Vec>& pts) {
  double s = 0.0;
  for (const auto& p : pts) {
    for (int i = 0; i < kMaxDim; ++i) s = std::max(s, std::abs(p[i] - pts[0][i]));
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// GridSet

GridSet::GridSet(int dim, double h, const Index& lo, const Index& size) : dim_(dim), h_(h), lo_(lo), size_(size) {
  require(dim >= 1 && dim <= kMaxDim, ErrorKind::InvalidArgument, "grid dimension must be 1..3");
  require(h > 0.0 && std::isfinite(h), ErrorKind::InvalidArgument, "grid spacing must be positive");
  std::size_t cells = 1;
  for (int i = 0; i < kMaxDim; ++i) {
    if (i >= dim) {
      lo_[static_cast<std::size_t>(i)] = 0;
      size_[static_cast<std::size_t>(i)] = 1;
    }
    require(size_[static_cast<std::size_t>(i)] >= 1, ErrorKind::InvalidArgument, "grid box must be nonempty");
    cells *= static_cast<std::size_t>(size_[static_cast<std::size_t>(i)]);
  }
  bits_.assign(cells, 0);
}

GridSet GridSet::covering(int dim, double h, const Vec& min_corner, const Vec& max_corner, long margin) {
  Index lo{0, 0, 0};
  Index size{1, 1, 1};
  for (int i = 0; i < dim; ++i) {
    const long a = static_cast<long>(std::floor(min_corner[i] / h + 1e-9)) - margin;
    const long b = static_cast<long>(std::ceil(max_corner[i] / h - 1e-9)) + margin;
    lo[static_cast<std::size_t>(i)] = a;
    size[static_cast<std::size_t>(i)] = b - a + 1;
  }
  return GridSet(dim, h, lo, size);
}

GridSet GridSet::single(int dim, double h, const Vec& x) {
  GridSet g = covering(dim, h, x, x, 1);
  g.mark(x);
  return g;
}

GridSet GridSet::ball(int dim, double h, const Vec& c, double r) {
  Vec lo = c;
  Vec hi = c;
  for (int i = 0; i < dim; ++i) {
    lo[i] -= r;
    hi[i] += r;
  }
  GridSet g = covering(dim, h, lo, hi, 1);
  const double r2 = (r + 1e-9 * h) * (r + 1e-9 * h);
  for (std::size_t k = 0; k < g.bits_.size(); ++k) {
    if ((g.point(k) - c).norm2() <= r2) g.bits_[k] = 1;
  }
  return g;
}

GridSet GridSet::unit_cell(int dim, double h) {
  const long top = static_cast<long>(std::floor(1.0 / h + 1e-9));
  Index lo{0, 0, 0};
  Index size{1, 1, 1};
  for (int i = 0; i < dim; ++i) {
    lo[static_cast<std::size_t>(i)] = -1;
    size[static_cast<std::size_t>(i)] = top + 3;
  }
  GridSet g(dim, h, lo, size);
  for (std::size_t k = 0; k < g.bits_.size(); ++k) {
    const Index i = g.index_of(k);
    bool in = true;
    for (int a = 0; a < dim; ++a) in = in && i[static_cast<std::size_t>(a)] >= 0 && i[static_cast<std::size_t>(a)] <= top;
    g.bits_[k] = in ? 1 : 0;
  }
  return g;
}

GridSet GridSet::reflected_cell(int dim, double h) {
  const GridSet y = unit_cell(dim, h);
  const long top = static_cast<long>(std::floor(1.0 / h + 1e-9));
  Index lo{0, 0, 0};
  for (int a = 0; a < dim; ++a) lo[static_cast<std::size_t>(a)] = -top - 1;
  GridSet g(dim, h, lo, y.size_);
  for (std::size_t k = 0; k < y.bits_.size(); ++k) {
    if (!y.bits_[k]) continue;
    Index i = y.index_of(k);
    for (int a = 0; a < dim; ++a) i[static_cast<std::size_t>(a)] = -i[static_cast<std::size_t>(a)];
    g.set(i);
  }
  return g;
}

std::size_t GridSet::occupied_count() const {
  std::size_t n = 0;
  for (auto b : bits_) n += b;
  return n;
}

bool GridSet::in_box(const Index& i) const {
  for (int a = 0; a < dim_; ++a) {
    const auto u = static_cast<std::size_t>(a);
    if (i[u] < lo_[u] || i[u] >= lo_[u] + size_[u]) return false;
  }
  return true;
}

std::size_t GridSet::linear(const Index& i) const {
  std::size_t lin = 0;
  for (int a = dim_ - 1; a >= 0; --a) {
    const auto u = static_cast<std::size_t>(a);
    lin = lin * static_cast<std::size_t>(size_[u]) + static_cast<std::size_t>(i[u] - lo_[u]);
  }
  return lin;
}

Index GridSet::index_of(std::size_t lin) const {
  Index i{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    const auto u = static_cast<std::size_t>(a);
    const auto s = static_cast<std::size_t>(size_[u]);
    i[u] = lo_[u] + static_cast<long>(lin % s);
    lin /= s;
  }
  return i;
}

Vec GridSet::point(const Index& i) const {
  Vec p;
  for (int a = 0; a < dim_; ++a) p[a] = static_cast<double>(i[static_cast<std::size_t>(a)]) * h_;
  return p;
}

Index GridSet::nearest(const Vec& x) const {
  Index i{0, 0, 0};
  for (int a = 0; a < dim_; ++a) i[static_cast<std::size_t>(a)] = std::lround(x[a] / h_);
  return i;
}

void GridSet::set(const Index& i, bool v) {
  if (!in_box(i)) fail(ErrorKind::WindowOverflow, "cell outside the grid window");
  bits_[linear(i)] = v ? 1 : 0;
}

void GridSet::mark(const Vec& x) { set(nearest(x)); }

std::vector<Index> GridSet::occupied_indices() const {
  std::vector<Index> out;
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k]) out.push_back(index_of(k));
  }
  return out;
}

std::vector<Vec> GridSet::occupied_points() const {
  std::vector<Vec> out;
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k]) out.push_back(point(k));
  }
  return out;
}

bool GridSet::touches_boundary() const {
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (!bits_[k]) continue;
    const Index i = index_of(k);
    for (int a = 0; a < dim_; ++a) {
      const auto u = static_cast<std::size_t>(a);
      if (i[u] == lo_[u] || i[u] == lo_[u] + size_[u] - 1) return true;
    }
  }
  return false;
}

GridSet GridSet::reboxed(const Index& lo, const Index& size) const {
  GridSet g(dim_, h_, lo, size);
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (!bits_[k]) continue;
    const Index i = index_of(k);
    if (g.in_box(i)) g.bits_[g.linear(i)] = 1;
  }
  return g;
}

GridSet GridSet::trimmed(long margin) const {
  Index mn{0, 0, 0};
  Index mx{0, 0, 0};
  bool any = false;
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (!bits_[k]) continue;
    const Index i = index_of(k);
    for (int a = 0; a < dim_; ++a) {
      const auto u = static_cast<std::size_t>(a);
      mn[u] = any ? std::min(mn[u], i[u]) : i[u];
      mx[u] = any ? std::max(mx[u], i[u]) : i[u];
    }
    any = true;
  }
  if (!any) fail(ErrorKind::EmptySet, "cannot trim an empty grid");
  Index lo{0, 0, 0};
  Index size{1, 1, 1};
  for (int a = 0; a < dim_; ++a) {
    const auto u = static_cast<std::size_t>(a);
    lo[u] = mn[u] - margin;
    size[u] = mx[u] - mn[u] + 1 + 2 * margin;
  }
  return reboxed(lo, size);
}

GridSet GridSet::scaled(double c) const {
  require(c > 0.0, ErrorKind::InvalidArgument, "grid scale factor must be positive");
  GridSet g = *this;
  g.h_ = h_ * c;
  return g;
}

GridSet GridSet::shifted(const Index& z) const {
  GridSet g = *this;
  for (int a = 0; a < dim_; ++a) g.lo_[static_cast<std::size_t>(a)] += z[static_cast<std::size_t>(a)];
  return g;
}

bool GridSet::subset_of(const GridSet& other) const {
  require(same_spacing(h_, other.h_), ErrorKind::InvalidArgument, "subset test needs a common lattice");
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k] && !other.test(index_of(k))) return false;
  }
  return true;
}

GridSet GridSet::united(const GridSet& other) const {
  require(same_spacing(h_, other.h_), ErrorKind::InvalidArgument, "union needs a common lattice");
  Index lo{0, 0, 0};
  Index size{1, 1, 1};
  for (int a = 0; a < dim_; ++a) {
    const auto u = static_cast<std::size_t>(a);
    lo[u] = std::min(lo_[u], other.lo_[u]);
    size[u] = std::max(lo_[u] + size_[u], other.lo_[u] + other.size_[u]) - lo[u];
  }
  GridSet g = reboxed(lo, size);
  for (std::size_t k = 0; k < other.bits_.size(); ++k) {
    if (other.bits_[k]) g.bits_[g.linear(other.index_of(k))] = 1;
  }
  return g;
}

double GridSet::radius() const {
  double r2 = 0.0;
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k]) r2 = std::max(r2, point(k).norm2());
  }
  return std::sqrt(r2);
}

double GridSet::min_coord(int axis) const {
  double v = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k]) v = std::min(v, point(k)[axis]);
  }
  if (!std::isfinite(v)) fail(ErrorKind::EmptySet, "empty grid");
  return v;
}

double GridSet::max_coord(int axis) const {
  double v = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k]) v = std::max(v, point(k)[axis]);
  }
  if (!std::isfinite(v)) fail(ErrorKind::EmptySet, "empty grid");
  return v;
}

void GridSet::dump(std::ostream& out) const {
  out << dim_ << ' ' << format_double(h_);
  for (int a = 0; a < dim_; ++a) out << ' ' << format_double(lo_[static_cast<std::size_t>(a)] * h_);
  for (int a = 0; a < dim_; ++a) {
    const auto u = static_cast<std::size_t>(a);
    out << ' ' << format_double((lo_[u] + size_[u] - 1) * h_);
  }
  for (int a = 0; a < dim_; ++a) out << ' ' << size_[static_cast<std::size_t>(a)];
  out << '\n';
  const auto row = static_cast<std::size_t>(size_[0]);
  for (std::size_t k = 0; k < bits_.size(); k += row) {
    for (std::size_t j = 0; j < row; ++j) out << (bits_[k + j] ? '1' : '0');
    out << '\n';
  }
}

GridSet GridSet::load(std::istream& in) {
  int dim = 0;
  double h = 0.0;
  if (!(in >> dim >> h) || dim < 1 || dim > kMaxDim) fail(ErrorKind::Io, "malformed grid header");
  Vec mn;
  Vec mx;
  Index size{1, 1, 1};
  for (int a = 0; a < dim; ++a) in >> mn[a];
  for (int a = 0; a < dim; ++a) in >> mx[a];
  for (int a = 0; a < dim; ++a) in >> size[static_cast<std::size_t>(a)];
  if (!in) fail(ErrorKind::Io, "malformed grid header");
  Index lo{0, 0, 0};
  for (int a = 0; a < dim; ++a) lo[static_cast<std::size_t>(a)] = std::lround(mn[a] / h);
  GridSet g(dim, h, lo, size);
  const auto row = static_cast<std::size_t>(size[0]);
  std::string line;
  for (std::size_t k = 0; k < g.bits_.size(); k += row) {
    if (!(in >> line) || line.size() != row) fail(ErrorKind::Io, "malformed grid row");
    for (std::size_t j = 0; j < row; ++j) g.bits_[k + j] = line[j] == '1' ? 1 : 0;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Hull construction

namespace {

/// Orthonormal basis of the affine hull of pts (relative to pts[0]).
std::vector<Vec> affine_basis(const std::vector<Vec>& pts, int dim) {
  std::vector<Vec> basis;
  const double tol = 1e-9 * std::max(extent(pts), 1e-300);
  for (const auto& p : pts) {
    Vec v = p - pts[0];
    for (const auto& e : basis) v -= v.dot(e) * e;
    const double n = v.norm();
    if (n > tol) basis.push_back(v * (1.0 / n));
    if (static_cast<int>(basis.size()) == dim) break;
  }
  // Re-orthogonalize once for stability.
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) basis[i] -= basis[i].dot(basis[j]) * basis[j];
    basis[i] = basis[i] * (1.0 / basis[i].norm());
  }
  return basis;
}

std::vector<int> hull_1d(const std::vector<Vec>& pts) {
  int lo = 0;
  int hi = 0;
  for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
    if (pts[static_cast<std::size_t>(i)][0] < pts[static_cast<std::size_t>(lo)][0]) lo = i;
    if (pts[static_cast<std::size_t>(i)][0] > pts[static_cast<std::size_t>(hi)][0]) hi = i;
  }
  return {lo, hi};
}

double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
std::vector<int> hull_2d(const std::vector<Vec>& pts) {
  std::vector<int> order(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Vec& p = pts[static_cast<std::size_t>(a)];
    const Vec& q = pts[static_cast<std::size_t>(b)];
    return p[0] < q[0] || (p[0] == q[0] && p[1] < q[1]);
  });
  const double s = extent(pts);
  const double eps = 1e-12 * s * s;
  std::vector<int> h(2 * order.size());
  std::size_t k = 0;
  auto at = [&](int i) -> const Vec& { return pts[static_cast<std::size_t>(i)]; };
  for (int i : order) {
    while (k >= 2 && cross2(at(h[k - 2]), at(h[k - 1]), at(i)) <= eps) --k;
    h[k++] = i;
  }
  const std::size_t lower = k + 1;
  for (auto it = order.rbegin() + 1; it != order.rend(); ++it) {
    while (k >= lower && cross2(at(h[k - 2]), at(h[k - 1]), at(*it)) <= eps) --k;
    h[k++] = *it;
  }
  h.resize(k - 1);
  return h;
}

struct Face3 {
  int a, b, c;
  Vec n;
  double off;
};

Face3 make_face(const std::vector<Vec>& p, int a, int b, int c) {
  Vec n = cross(p[static_cast<std::size_t>(b)] - p[static_cast<std::size_t>(a)],
                p[static_cast<std::size_t>(c)] - p[static_cast<std::size_t>(a)]);
  const double len = n.norm();
  if (len > 0.0) n = n * (1.0 / len);
  return {a, b, c, n, n.dot(p[static_cast<std::size_t>(a)])};
}

/// Incremental 3D hull over a full-dimensional point set. Returns triangles
/// (outward orientation) over input indices.
std::vector<Face3> hull_3d_faces(const std::vector<Vec>& p) {
  const double eps = 1e-10 * std::max(extent(p), 1e-300);
  auto P = [&](int i) -> const Vec& { return p[static_cast<std::size_t>(i)]; };
  const int n = static_cast<int>(p.size());
  int i0 = 0;
  int i1 = 0;
  for (int i = 1; i < n; ++i) {
    if ((P(i) - P(i0)).norm2() > (P(i1) - P(i0)).norm2()) i1 = i;
  }
  int i2 = -1;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = cross(P(i1) - P(i0), P(i) - P(i0)).norm();
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  int i3 = -1;
  best = 0.0;
  const Vec nrm = cross(P(i1) - P(i0), P(i2) - P(i0));
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(nrm.dot(P(i) - P(i0)));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  std::vector<Face3> faces;
  const Vec inside = (P(i0) + P(i1) + P(i2) + P(i3)) * 0.25;
  const std::array<std::array<int, 3>, 4> tet{{{i0, i1, i2}, {i0, i1, i3}, {i0, i2, i3}, {i1, i2, i3}}};
  for (const auto& t : tet) {
    Face3 f = make_face(p, t[0], t[1], t[2]);
    if (f.n.dot(inside) - f.off > 0.0) f = make_face(p, t[0], t[2], t[1]);
    faces.push_back(f);
  }

  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    if (i != i0 && i != i1 && i != i2 && i != i3) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return (P(a) - inside).norm2() > (P(b) - inside).norm2(); });

  std::vector<char> visible;
  for (int i : order) {
    visible.assign(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (faces[f].n.dot(P(i)) - faces[f].off > eps) {
        visible[f] = 1;
        any = true;
      }
    }
    if (!any) continue;
    std::set<std::pair<int, int>> edges;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      edges.insert({faces[f].a, faces[f].b});
      edges.insert({faces[f].b, faces[f].c});
      edges.insert({faces[f].c, faces[f].a});
    }
    std::vector<Face3> next;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) next.push_back(faces[f]);
    }
    for (const auto& [a, b] : edges) {
      if (!edges.count({b, a})) next.push_back(make_face(p, a, b, i));
    }
    faces = std::move(next);
  }
  return faces;
}

/// Extreme vertices of a 3D hull: a vertex is extreme iff the normals of its
/// incident faces span R^3.
std::vector<int> hull_3d(const std::vector<Vec>& p) {
  const auto faces = hull_3d_faces(p);
  std::map<int, std::vector<Vec>> normals;
  for (const auto& f : faces) {
    for (int v : {f.a, f.b, f.c}) normals[v].push_back(f.n);
  }
  std::vector<int> extreme;
  for (const auto& [v, ns] : normals) {
    bool full = false;
    for (std::size_t i = 0; i < ns.size() && !full; ++i) {
      for (std::size_t j = i + 1; j < ns.size() && !full; ++j) {
        const Vec c = cross(ns[i], ns[j]);
        if (c.norm() < 1e-9) continue;
        for (std::size_t k = j + 1; k < ns.size() && !full; ++k) full = std::abs(c.dot(ns[k])) > 1e-9;
      }
    }
    if (full) extreme.push_back(v);
  }
  return extreme;
}

double point_segment_distance(const Vec& x, const Vec& a, const Vec& b) {
  const Vec d = b - a;
  const double len2 = d.norm2();
  double t = len2 > 0.0 ? (x - a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (x - (a + t * d)).norm();
}

// Closest point on triangle (Ericson, Real-Time Collision Detection 5.1.5).
double point_triangle_distance(const Vec& p, const Vec& a, const Vec& b, const Vec& c) {
  const Vec ab = b - a;
  const Vec ac = c - a;
  const Vec ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return ap.norm();
  const Vec bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return bp.norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return (p - (a + (d1 / (d1 - d3)) * ab)).norm();
  const Vec cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return cp.norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return (p - (a + (d2 / (d2 - d6)) * ac)).norm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return (p - (b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b))).norm();
  }
  const double denom = 1.0 / (va + vb + vc);
  return (p - (a + ab * (vb * denom) + ac * (vc * denom))).norm();
}

}  // namespace

struct PolytopeBuilder {
  static Polytope build(int dim, const std::vector<Vec>& input) {
    require(!input.empty(), ErrorKind::EmptySet, "convex hull of an empty set");
    std::vector<Vec> pts = input;
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return a.c < b.c; });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    Polytope P;
    P.dim_ = dim;
    const auto basis = affine_basis(pts, dim);
    const int k = static_cast<int>(basis.size());
    P.affine_dim_ = k;
    if (k == 0) {
      P.vertices_ = {pts[0]};
      P.origin_ = pts[0];
      return P;
    }
    if (k < dim) {
      P.origin_ = pts[0];
      P.basis_ = basis;
      std::vector<Vec> proj;
      proj.reserve(pts.size());
      for (const auto& q : pts) proj.push_back(P.to_frame(q));
      // Build the inner hull while remembering which input point each vertex is.
      std::vector<int> idx = extreme_indices(k, proj);
      std::vector<Vec> inner_pts;
      for (int i : idx) {
        inner_pts.push_back(proj[static_cast<std::size_t>(i)]);
        P.vertices_.push_back(pts[static_cast<std::size_t>(i)]);
      }
      auto inner = std::make_shared<Polytope>(full(k, inner_pts));
      P.inner_ = inner;
      return P;
    }
    std::vector<int> idx = extreme_indices(dim, pts);
    std::vector<Vec> verts;
    for (int i : idx) verts.push_back(pts[static_cast<std::size_t>(i)]);
    Polytope F = full(dim, verts);
    F.dim_ = dim;
    F.affine_dim_ = dim;
    return F;
  }

  static std::vector<int> extreme_indices(int dim, const std::vector<Vec>& pts) {
    if (dim == 1) return hull_1d(pts);
    if (dim == 2) return hull_2d(pts);
    return hull_3d(pts);
  }

  /// Polytope from points that are all extreme and affinely span R^dim.
  /// Vertex order is preserved.
  static Polytope full(int dim, const std::vector<Vec>& verts) {
    Polytope P;
    P.dim_ = dim;
    P.affine_dim_ = dim;
    P.vertices_ = verts;
    if (dim == 1) {
      const bool first_low = verts[0][0] <= verts[1][0];
      const int lo = first_low ? 0 : 1;
      const int hi = 1 - lo;
      P.facets_.push_back({Vec{1.0}, verts[static_cast<std::size_t>(hi)][0]});
      P.facets_.push_back({Vec{-1.0}, -verts[static_cast<std::size_t>(lo)][0]});
      P.faces_.push_back({hi, -1, -1});
      P.faces_.push_back({lo, -1, -1});
    } else if (dim == 2) {
      const int m = static_cast<int>(verts.size());
      for (int i = 0; i < m; ++i) {
        const int j = (i + 1) % m;
        const Vec& a = verts[static_cast<std::size_t>(i)];
        const Vec& b = verts[static_cast<std::size_t>(j)];
        Vec n{b[1] - a[1], a[0] - b[0]};
        n = n * (1.0 / n.norm());
        P.facets_.push_back({n, n.dot(a)});
        P.faces_.push_back({i, j, -1});
      }
    } else {
      for (const auto& f : hull_3d_faces(verts)) {
        P.facets_.push_back({f.n, f.off});
        P.faces_.push_back({f.a, f.b, f.c});
      }
    }
    return P;
  }
};

Polytope Polytope::hull(int dim, const std::vector<Vec>& points) {
  require(dim >= 1 && dim <= kMaxDim, ErrorKind::InvalidArgument, "polytope dimension must be 1..3");
  return PolytopeBuilder::build(dim, points);
}

Vec Polytope::to_frame(const Vec& x) const {
  Vec y;
  const Vec d = x - origin_;
  for (std::size_t i = 0; i < basis_.size(); ++i) y[static_cast<int>(i)] = d.dot(basis_[i]);
  return y;
}

double Polytope::support(const Vec& p) const {
  double s = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices_) s = std::max(s, p.dot(v));
  return s;
}

double Polytope::face_distance(const Vec& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& f : faces_) {
    const Vec& a = vertices_[static_cast<std::size_t>(f[0])];
    if (dim_ == 1) {
      d = std::min(d, std::abs(x[0] - a[0]));
    } else if (dim_ == 2) {
      d = std::min(d, point_segment_distance(x, a, vertices_[static_cast<std::size_t>(f[1])]));
    } else {
      d = std::min(d, point_triangle_distance(x, a, vertices_[static_cast<std::size_t>(f[1])],
                                              vertices_[static_cast<std::size_t>(f[2])]));
    }
  }
  return d;
}

double Polytope::signed_distance(const Vec& x) const {
  if (vertices_.empty()) fail(ErrorKind::EmptySet, "empty polytope");
  if (affine_dim_ == 0) return (x - vertices_[0]).norm();
  if (affine_dim_ < dim_) {
    const Vec y = to_frame(x);
    Vec back = origin_;
    for (std::size_t i = 0; i < basis_.size(); ++i) back += y[static_cast<int>(i)] * basis_[i];
    const double perp = (x - back).norm();
    const double in = std::max(0.0, inner_->signed_distance(y));
    return std::sqrt(perp * perp + in * in);
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : facets_) worst = std::max(worst, f.normal.dot(x) - f.offset);
  if (worst <= 0.0) return worst;
  return face_distance(x);
}

double Polytope::norm() const {
  double r = 0.0;
  for (const auto& v : vertices_) r = std::max(r, v.norm());
  return r;
}

Polytope Polytope::scaled(double c) const {
  require(c > 0.0, ErrorKind::InvalidArgument, "polytope scale factor must be positive");
  Polytope P = *this;
  for (auto& v : P.vertices_) v = v * c;
  for (auto& f : P.facets_) f.offset *= c;
  P.origin_ = origin_ * c;
  if (inner_) P.inner_ = std::make_shared<Polytope>(inner_->scaled(c));
  return P;
}

Polytope Polytope::translated(const Vec& z) const {
  Polytope P = *this;
  for (auto& v : P.vertices_) v += z;
  for (auto& f : P.facets_) f.offset += f.normal.dot(z);
  P.origin_ = origin_ + z;
  return P;
}

Vec Polytope::centroid() const {
  Vec c;
  for (const auto& v : vertices_) c += v;
  return c * (1.0 / static_cast<double>(vertices_.size()));
}

std::vector<int> Polytope::facet_vertices(std::size_t facet, double tol) const {
  const auto& f = facets_.at(facet);
  std::vector<int> out;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (std::abs(f.normal.dot(vertices_[i]) - f.offset) <= tol * (1.0 + std::abs(f.offset))) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

void Polytope::dump_csv(std::ostream& out) const {
  for (int a = 0; a < dim_; ++a) out << (a ? ",x" : "x") << (a + 1);
  out << '\n';
  for (const auto& v : vertices_) {
    for (int a = 0; a < dim_; ++a) out << (a ? "," : "") << format_double(v[a]);
    out << '\n';
  }
}

Polytope convex_hull(int dim, const std::vector<Vec>& points) { return Polytope::hull(dim, points); }

Polytope convex_hull(const GridSet& a) {
  // Candidates: the extreme cells of every line along the last axis. Hulls are
  // built on integer lattice coordinates (exact orientation tests) and scaled.
  const int dim = a.dim();
  const int last = dim - 1;
  std::map<std::pair<long, long>, std::pair<long, long>> ends;
  for (const auto& i : a.occupied_indices()) {
    const std::pair<long, long> key{dim > 1 ? i[0] : 0, dim > 2 ? i[1] : 0};
    const long v = i[static_cast<std::size_t>(last)];
    auto it = ends.find(key);
    if (it == ends.end()) {
      ends.emplace(key, std::make_pair(v, v));
    } else {
      it->second.first = std::min(it->second.first, v);
      it->second.second = std::max(it->second.second, v);
    }
  }
  if (ends.empty()) fail(ErrorKind::EmptySet, "convex hull of an empty grid");
  std::vector<Vec> pts;
  for (const auto& [key, mm] : ends) {
    for (long v : {mm.first, mm.second}) {
      Vec p;
      if (dim > 1) p[0] = static_cast<double>(key.first);
      if (dim > 2) p[1] = static_cast<double>(key.second);
      p[last] = static_cast<double>(v);
      pts.push_back(p);
    }
  }
  return Polytope::hull(dim, pts).scaled(a.h());
}

double support_function(const Polytope& p, const Vec& dir) { return p.support(dir); }

// ---------------------------------------------------------------------------
// Distances

std::vector<double> squared_distance_transform(const GridSet& g) {
  const int dim = g.dim();
  std::vector<double> f(g.cell_count());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = g.test(k) ? 0.0 : kFar;
  std::vector<std::size_t> stride(static_cast<std::size_t>(dim));
  std::size_t s = 1;
  for (int a = 0; a < dim; ++a) {
    stride[static_cast<std::size_t>(a)] = s;
    s *= static_cast<std::size_t>(g.size()[static_cast<std::size_t>(a)]);
  }
  // Felzenszwalb-Huttenlocher lower envelope of parabolas, one axis at a time.
  for (int a = 0; a < dim; ++a) {
    const auto n = static_cast<std::size_t>(g.size()[static_cast<std::size_t>(a)]);
    const std::size_t st = stride[static_cast<std::size_t>(a)];
    std::vector<double> line(n);
    std::vector<double> out(n);
    std::vector<std::size_t> v(n);
    std::vector<double> z(n + 1);
    for (std::size_t base = 0; base < f.size(); ++base) {
      if ((base / st) % n != 0) continue;
      for (std::size_t q = 0; q < n; ++q) line[q] = f[base + q * st];
      std::size_t k = 0;
      v[0] = 0;
      z[0] = -kFar;
      z[1] = kFar;
      for (std::size_t q = 1; q < n; ++q) {
        double sq = 0.0;
        while (true) {
          const auto vq = static_cast<double>(v[k]);
          const auto qd = static_cast<double>(q);
          sq = ((line[q] + qd * qd) - (line[v[k]] + vq * vq)) / (2.0 * qd - 2.0 * vq);
          if (sq <= z[k] && k > 0) {
            --k;
          } else {
            break;
          }
        }
        if (sq <= z[k]) {
          // k == 0: replace the only parabola
          v[0] = q;
          z[0] = -kFar;
          z[1] = kFar;
          continue;
        }
        ++k;
        v[k] = q;
        z[k] = sq;
        z[k + 1] = kFar;
      }
      k = 0;
      for (std::size_t q = 0; q < n; ++q) {
        while (z[k + 1] < static_cast<double>(q)) ++k;
        const double d = static_cast<double>(q) - static_cast<double>(v[k]);
        out[q] = d * d + line[v[k]];
      }
      for (std::size_t q = 0; q < n; ++q) f[base + q * st] = out[q];
    }
  }
  for (auto& x : f) {
    if (x >= kFar * 0.5) x = std::numeric_limits<double>::infinity();
  }
  return f;
}

double directed_excess(const GridSet& a, const GridSet& b) {
  require(a.dim() == b.dim(), ErrorKind::InvalidArgument, "dimension mismatch");
  const auto apts = a.occupied_indices();
  if (apts.empty() || b.empty()) fail(ErrorKind::EmptySet, "Hausdorff distance of an empty set");
  const int dim = a.dim();
  const bool same = same_spacing(a.h(), b.h());
  // Query indices on B's lattice.
  std::vector<Index> q;
  q.reserve(apts.size());
  if (same) {
    q = apts;
  } else {
    for (const auto& i : apts) q.push_back(b.nearest(a.point(i)));
  }
  Index lo = b.lo();
  Index hi{0, 0, 0};
  for (int d = 0; d < dim; ++d) {
    const auto u = static_cast<std::size_t>(d);
    hi[u] = b.lo()[u] + b.size()[u] - 1;
  }
  for (const auto& i : q) {
    for (int d = 0; d < dim; ++d) {
      const auto u = static_cast<std::size_t>(d);
      lo[u] = std::min(lo[u], i[u]);
      hi[u] = std::max(hi[u], i[u]);
    }
  }
  Index size{1, 1, 1};
  for (int d = 0; d < dim; ++d) {
    const auto u = static_cast<std::size_t>(d);
    size[u] = hi[u] - lo[u] + 1;
  }
  const GridSet box = b.reboxed(lo, size);
  const auto edt = squared_distance_transform(box);
  double worst = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    double d = std::sqrt(edt[box.linear(q[k])]) * b.h();
    if (!same) {
      // The snapped distance bounds the true one; search the cells of B
      // within that bound around the true query point.
      const Vec x = a.point(apts[k]);
      const double bound = d + (x - b.point(q[k])).norm();
      const long r = static_cast<long>(std::ceil(bound / b.h())) + 1;
      double best = bound;
      Index c = b.nearest(x);
      Index i{0, 0, 0};
      for (i[2] = dim > 2 ? c[2] - r : 0; i[2] <= (dim > 2 ? c[2] + r : 0); ++i[2]) {
        for (i[1] = dim > 1 ? c[1] - r : 0; i[1] <= (dim > 1 ? c[1] + r : 0); ++i[1]) {
          for (i[0] = c[0] - r; i[0] <= c[0] + r; ++i[0]) {
            if (b.test(i)) best = std::min(best, (b.point(i) - x).norm());
          }
        }
      }
      d = best;
    }
    worst = std::max(worst, d);
  }
  return worst;
}

double hausdorff(const GridSet& a, const GridSet& b) { return std::max(directed_excess(a, b), directed_excess(b, a)); }

double hausdorff(const GridSet& a, const Polytope& b) {
  require(a.dim() == b.dim(), ErrorKind::InvalidArgument, "dimension mismatch");
  return hausdorff(a, rasterize(b, a.h()));
}

double hausdorff(const Polytope& a, const GridSet& b) { return hausdorff(b, a); }

namespace {

std::vector<Vec> sample_directions(int dim) {
  std::vector<Vec> dirs;
  if (dim == 1) return {Vec{1.0}, Vec{-1.0}};
  if (dim == 2) {
    const int m = 8192;
    for (int i = 0; i < m; ++i) {
      const double th = 2.0 * std::numbers::pi * i / m;
      dirs.push_back(Vec{std::cos(th), std::sin(th)});
    }
    return dirs;
  }
  const int m = 20000;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < m; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / m;
    const double r = std::sqrt(1.0 - z * z);
    dirs.push_back(Vec{r * std::cos(golden * i), r * std::sin(golden * i), z});
  }
  return dirs;
}

}  // namespace

double hausdorff(const Polytope& a, const Polytope& b) {
  require(a.dim() == b.dim(), ErrorKind::InvalidArgument, "dimension mismatch");
  auto dirs = sample_directions(a.dim());
  for (const auto& f : a.facets()) dirs.push_back(f.normal);
  for (const auto& f : b.facets()) dirs.push_back(f.normal);
  double d = 0.0;
  for (const auto& p : dirs) d = std::max(d, std::abs(a.support(p) - b.support(p)));
  return d;
}

// ---------------------------------------------------------------------------
// Rasterization

namespace {

void sample_simplex(const std::vector<Vec>& corners, double step, GridSet& g) {
  if (corners.size() == 1) {
    g.mark(corners[0]);
    return;
  }
  if (corners.size() == 2) {
    const double len = (corners[1] - corners[0]).norm();
    const int m = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int i = 0; i <= m; ++i) g.mark(corners[0] + (static_cast<double>(i) / m) * (corners[1] - corners[0]));
    return;
  }
  const double len = std::max((corners[1] - corners[0]).norm(), (corners[2] - corners[0]).norm());
  const int m = std::max(1, static_cast<int>(std::ceil(len / step)));
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; i + j <= m; ++j) {
      const double u = static_cast<double>(i) / m;
      const double v = static_cast<double>(j) / m;
      g.mark(corners[0] + u * (corners[1] - corners[0]) + v * (corners[2] - corners[0]));
    }
  }
}

}  // namespace

GridSet rasterize(const Polytope& p, double h, long margin) {
  const int dim = p.dim();
  Vec mn = p.vertices()[0];
  Vec mx = mn;
  for (const auto& v : p.vertices()) {
    for (int a = 0; a < dim; ++a) {
      mn[a] = std::min(mn[a], v[a]);
      mx[a] = std::max(mx[a], v[a]);
    }
  }
  GridSet g = GridSet::covering(dim, h, mn, mx, margin);
  if (p.full_dimensional()) {
    // Scanlines along axis 0: intersect the halfspaces with each line.
    const auto& lo = g.lo();
    const auto& sz = g.size();
    for (long i2 = 0; i2 < sz[2]; ++i2) {
      for (long i1 = 0; i1 < sz[1]; ++i1) {
        const double y1 = static_cast<double>(lo[1] + i1) * h;
        const double y2 = static_cast<double>(lo[2] + i2) * h;
        double xmin = -std::numeric_limits<double>::infinity();
        double xmax = std::numeric_limits<double>::infinity();
        bool blocked = false;
        for (const auto& f : p.facets()) {
          const double rest = f.offset - (dim > 1 ? f.normal[1] * y1 : 0.0) - (dim > 2 ? f.normal[2] * y2 : 0.0);
          const double n0 = f.normal[0];
          if (std::abs(n0) < 1e-15) {
            blocked = blocked || rest < -1e-12 * h;
          } else if (n0 > 0) {
            xmax = std::min(xmax, rest / n0);
          } else {
            xmin = std::max(xmin, rest / n0);
          }
        }
        if (blocked || !(xmin <= xmax)) continue;
        const long a = std::max(lo[0], static_cast<long>(std::ceil(xmin / h - 1e-9)));
        const long b = std::min(lo[0] + sz[0] - 1, static_cast<long>(std::floor(xmax / h + 1e-9)));
        for (long i0 = a; i0 <= b; ++i0) g.set(Index{i0, lo[1] + i1, lo[2] + i2});
      }
    }
  }
  // Boundary / lower dimensional samples.
  const double step = 0.5 * h;
  if (p.affine_dim() == 0) {
    g.mark(p.vertices()[0]);
  } else if (p.full_dimensional()) {
    if (dim == 1) {
      for (const auto& v : p.vertices()) g.mark(v);
    } else {
      const auto& V = p.vertices();
      // boundary simplices are the facet planes' vertex sets; sample through
      // facet vertex lists (triangulated as a fan for coplanar groups)
      for (std::size_t f = 0; f < p.facets().size(); ++f) {
        auto idx = p.facet_vertices(f, 1e-9);
        if (dim == 2) {
          if (idx.size() >= 2) sample_simplex({V[static_cast<std::size_t>(idx[0])], V[static_cast<std::size_t>(idx[1])]}, step, g);
        } else {
          for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
            for (std::size_t l = k + 1; l < idx.size(); ++l) {
              sample_simplex({V[static_cast<std::size_t>(idx[0])], V[static_cast<std::size_t>(idx[k])],
                              V[static_cast<std::size_t>(idx[l])]},
                             step, g);
            }
          }
        }
      }
    }
  } else {
    // Segment or polygon embedded in higher dimension: sample its interior.
    const auto& V = p.vertices();
    if (p.affine_dim() == 1) {
      sample_simplex({V.front(), V.back()}, step, g);
    } else {
      for (std::size_t k = 1; k + 1 < V.size(); ++k) sample_simplex({V[0], V[k], V[k + 1]}, step, g);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Minkowski sum

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

GridSet resample(const GridSet& b, double h) {
  std::vector<Vec> pts = b.occupied_points();
  Vec mn = pts[0];
  Vec mx = pts[0];
  for (const auto& p : pts) {
    for (int a = 0; a < b.dim(); ++a) {
      mn[a] = std::min(mn[a], p[a]);
      mx[a] = std::max(mx[a], p[a]);
    }
  }
  GridSet g = GridSet::covering(b.dim(), h, mn, mx, 1);
  for (const auto& p : pts) g.mark(p);
  return g;
}

}  // namespace

GridSet minkowski_sum(const GridSet& a_in, const GridSet& b_in, std::size_t max_cells) {
  require(a_in.dim() == b_in.dim(), ErrorKind::InvalidArgument, "dimension mismatch");
  if (a_in.empty() || b_in.empty()) fail(ErrorKind::EmptySet, "Minkowski sum of an empty set");
  const GridSet a = a_in.trimmed(0);
  const GridSet b = same_spacing(a_in.h(), b_in.h()) ? b_in.trimmed(0) : resample(b_in, a_in.h()).trimmed(0);
  const int dim = a.dim();
  Index lo{0, 0, 0};
  Index size{1, 1, 1};
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) {
    const auto u = static_cast<std::size_t>(d);
    lo[u] = a.lo()[u] + b.lo()[u];
    size[u] = a.size()[u] + b.size()[u] - 1;
    total *= static_cast<std::size_t>(size[u] + 2);
  }
  if (total > max_cells) {
    fail(ErrorKind::WindowOverflow, "Minkowski sum needs " + std::to_string(total) + " cells");
  }
  GridSet out(dim, a.h(), lo, size);

  // Row-major FFT shape: slowest axis first.
  std::vector<int> shape;
  for (int d = dim - 1; d >= 0; --d) shape.push_back(static_cast<int>(size[static_cast<std::size_t>(d)]));
  const std::size_t n_real = out.cell_count();
  const std::size_t n_last = static_cast<std::size_t>(shape.back());
  const std::size_t n_cplx = n_real / n_last * (n_last / 2 + 1);

  double* ra = fftw_alloc_real(n_real);
  double* rb = fftw_alloc_real(n_real);
  fftw_complex* ca = fftw_alloc_complex(n_cplx);
  fftw_complex* cb = fftw_alloc_complex(n_cplx);
  std::fill(ra, ra + n_real, 0.0);
  std::fill(rb, rb + n_real, 0.0);
  // Place each input at offset (its lo - its own lo) in the output layout.
  auto place = [&](const GridSet& g, double* dst) {
    for (std::size_t k = 0; k < g.cell_count(); ++k) {
      if (!g.test(k)) continue;
      Index i = g.index_of(k);
      for (int d = 0; d < dim; ++d) {
        const auto u = static_cast<std::size_t>(d);
        i[u] = i[u] - g.lo()[u] + lo[u];
      }
      dst[out.linear(i)] = 1.0;
    }
  };
  place(a, ra);
  place(b, rb);

  fftw_plan pa;
  fftw_plan pb;
  fftw_plan pinv;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    pa = fftw_plan_dft_r2c(dim, shape.data(), ra, ca, FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c(dim, shape.data(), rb, cb, FFTW_ESTIMATE);
    pinv = fftw_plan_dft_c2r(dim, shape.data(), ca, ra, FFTW_ESTIMATE);
  }
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t k = 0; k < n_cplx; ++k) {
    const double re = ca[k][0] * cb[k][0] - ca[k][1] * cb[k][1];
    const double im = ca[k][0] * cb[k][1] + ca[k][1] * cb[k][0];
    ca[k][0] = re;
    ca[k][1] = im;
  }
  fftw_execute(pinv);
  const double scale = 1.0 / static_cast<double>(n_real);
  for (std::size_t k = 0; k < n_real; ++k) {
    if (ra[k] * scale > 0.5) out.set(k);
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(pinv);
  }
  fftw_free(ra);
  fftw_free(rb);
  fftw_free(ca);
  fftw_free(cb);
  return out.trimmed(1);
}

// ---------------------------------------------------------------------------
// Caratheodory

std::vector<WeightedVertex> reduce_combination(int dim, std::vector<WeightedVertex> combo) {
  while (static_cast<int>(combo.size()) > dim + 1) {
    const auto m = static_cast<Eigen::Index>(combo.size());
    Eigen::MatrixXd A(dim + 1, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (int i = 0; i < dim; ++i) A(i, j) = combo[static_cast<std::size_t>(j)].point[i];
      A(dim, j) = 1.0;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    Eigen::MatrixXd ker = lu.kernel();
    Eigen::VectorXd mu = ker.col(0);
    if (mu.maxCoeff() <= 0.0) mu = -mu;
    double t = std::numeric_limits<double>::infinity();
    Eigen::Index drop = -1;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (mu(j) > 1e-14) {
        const double r = combo[static_cast<std::size_t>(j)].weight / mu(j);
        if (r < t) {
          t = r;
          drop = j;
        }
      }
    }
    std::vector<WeightedVertex> next;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j == drop) continue;
      auto w = combo[static_cast<std::size_t>(j)];
      w.weight = std::max(0.0, w.weight - t * mu(j));
      if (w.weight > 0.0) next.push_back(w);
    }
    combo = std::move(next);
  }
  double s = 0.0;
  for (const auto& w : combo) s += w.weight;
  for (auto& w : combo) w.weight /= s;
  return combo;
}

namespace {

/// Ray shooting: returns (vertex index, weight) pairs with at most
/// affine_dim + 1 entries.
std::vector<std::pair<int, double>> decompose_rec(const Polytope& P, const Vec& x, double tol) {
  const auto& V = P.vertices();
  const double scale = std::max(1.0, P.norm());
  for (std::size_t i = 0; i < V.size(); ++i) {
    if ((V[i] - x).norm() <= tol * scale) return {{static_cast<int>(i), 1.0}};
  }
  if (P.affine_dim() == 0) return {{0, 1.0}};
  if (!P.full_dimensional()) {
    // Work in the affine frame; vertex order matches the inner polytope.
    std::vector<Vec> proj;
    Vec o = V[0];
    const auto basis = affine_basis(V, P.dim());
    for (const auto& v : V) {
      Vec y;
      for (std::size_t k = 0; k < basis.size(); ++k) y[static_cast<int>(k)] = (v - o).dot(basis[k]);
      proj.push_back(y);
    }
    Vec xy;
    for (std::size_t k = 0; k < basis.size(); ++k) xy[static_cast<int>(k)] = (x - o).dot(basis[k]);
    const Polytope Q = Polytope::hull(static_cast<int>(basis.size()), proj);
    auto sub = decompose_rec(Q, xy, tol);
    for (auto& [idx, w] : sub) {
      const Vec& qv = Q.vertices()[static_cast<std::size_t>(idx)];
      std::size_t best = 0;
      for (std::size_t i = 1; i < proj.size(); ++i) {
        if ((proj[i] - qv).norm2() < (proj[best] - qv).norm2()) best = i;
      }
      idx = static_cast<int>(best);
    }
    return sub;
  }
  // Pick the vertex farthest from x as the ray origin.
  std::size_t v0 = 0;
  for (std::size_t i = 1; i < V.size(); ++i) {
    if ((V[i] - x).norm2() > (V[v0] - x).norm2()) v0 = i;
  }
  const Vec d = x - V[v0];
  double s_exit = std::numeric_limits<double>::infinity();
  std::size_t hit = 0;
  for (std::size_t f = 0; f < P.facets().size(); ++f) {
    const auto& F = P.facets()[f];
    const double nd = F.normal.dot(d);
    const double gap = F.offset - F.normal.dot(V[v0]);
    if (nd <= 1e-14 * d.norm() || gap <= 1e-12 * scale) continue;
    const double s = gap / nd;
    if (s < s_exit) {
      s_exit = s;
      hit = f;
    }
  }
  if (!std::isfinite(s_exit)) fail(ErrorKind::NotInHull, "ray shooting found no exit facet");
  s_exit = std::max(s_exit, 1.0);
  const Vec z = V[v0] + s_exit * d;
  const auto fidx = P.facet_vertices(hit, 1e-9);
  std::vector<Vec> fpts;
  for (int i : fidx) fpts.push_back(V[static_cast<std::size_t>(i)]);
  const Polytope facet = Polytope::hull(P.dim(), fpts);
  auto sub = decompose_rec(facet, z, tol);
  std::vector<std::pair<int, double>> out;
  const double lam = 1.0 / s_exit;
  if (1.0 - lam > 0.0) out.emplace_back(static_cast<int>(v0), 1.0 - lam);
  for (const auto& [idx, w] : sub) {
    const Vec& fv = facet.vertices()[static_cast<std::size_t>(idx)];
    int mapped = -1;
    for (int i : fidx) {
      if (V[static_cast<std::size_t>(i)] == fv) mapped = i;
    }
    if (mapped < 0) fail(ErrorKind::NotInHull, "facet vertex mapping failed");
    out.emplace_back(mapped, lam * w);
  }
  return out;
}

}  // namespace

std::vector<WeightedVertex> caratheodory_decompose(const Polytope& p, const Vec& x, double tol) {
  const double scale = std::max(1.0, p.norm());
  const double sd = p.signed_distance(x);
  if (sd > tol * scale) {
    fail(ErrorKind::NotInHull, "point lies outside the polytope (distance " + format_double(sd) + ")");
  }
  auto raw = decompose_rec(p, x, tol);
  std::map<int, double> merged;
  for (const auto& [i, w] : raw) merged[i] += w;
  std::vector<WeightedVertex> combo;
  for (const auto& [i, w] : merged) {
    if (w > 0.0) combo.push_back({p.vertices()[static_cast<std::size_t>(i)], w, i});
  }
  return reduce_combination(p.dim(), std::move(combo));
}

}  // namespace frontlab
