#include "frontlab/reachable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "frontlab/error.hpp"

namespace frontlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Offset {
  Index v;
  Vec d;        // physical displacement
  double dist;  // |d|
  std::ptrdiff_t delta;
};

std::vector<std::ptrdiff_t> strides(const GridSet& g) {
  std::vector<std::ptrdiff_t> st(static_cast<std::size_t>(g.dim()));
  std::ptrdiff_t s = 1;
  for (int a = 0; a < g.dim(); ++a) {
    st[static_cast<std::size_t>(a)] = s;
    s *= static_cast<std::ptrdiff_t>(g.size()[static_cast<std::size_t>(a)]);
  }
  return st;
}

/// Lattice offsets with |v| h <= radius, sorted by length.
std::vector<Offset> ball_stencil(const GridSet& g, double radius) {
  const int dim = g.dim();
  const double h = g.h();
  const long r = static_cast<long>(std::ceil(radius / h + 1e-9));
  const auto st = strides(g);
  std::vector<Offset> out;
  Index v{0, 0, 0};
  for (v[2] = dim > 2 ? -r : 0; v[2] <= (dim > 2 ? r : 0); ++v[2]) {
    for (v[1] = dim > 1 ? -r : 0; v[1] <= (dim > 1 ? r : 0); ++v[1]) {
      for (v[0] = -r; v[0] <= r; ++v[0]) {
        Offset o;
        o.v = v;
        o.delta = 0;
        for (int a = 0; a < dim; ++a) {
          o.d[a] = static_cast<double>(v[static_cast<std::size_t>(a)]) * h;
          o.delta += v[static_cast<std::size_t>(a)] * st[static_cast<std::size_t>(a)];
        }
        o.dist = o.d.norm();
        if (o.dist > 0.0 && o.dist <= radius * (1.0 + 1e-12)) out.push_back(o);
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Offset& a, const Offset& b) { return a.dist < b.dist; });
  return out;
}

/// Time for |d - b tau| = a tau, the frozen-coefficient travel time along d.
double edge_time(const Vec& d, double dist, double a, const Vec& b, bool drift) {
  if (!drift) return dist / a;
  const double ab2 = a * a - b.norm2();
  const double db = d.dot(b);
  return dist * dist / (db + std::sqrt(db * db + ab2 * dist * dist));
}

bool on_boundary_layer(const GridSet& g, const Index& i) {
  for (int a = 0; a < g.dim(); ++a) {
    const auto u = static_cast<std::size_t>(a);
    if (i[u] <= g.lo()[u] || i[u] >= g.lo()[u] + g.size()[u] - 1) return true;
  }
  return false;
}

Index add(const Index& a, const Index& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

void check_window(std::size_t cells, std::size_t max_cells) {
  if (cells > max_cells) {
    fail(ErrorKind::WindowOverflow, "reach window needs " + std::to_string(cells) + " cells (limit " +
                                        std::to_string(max_cells) + ")");
  }
}

}  // namespace

double default_time_step(const Environment& env, double h) {
  return 2.0 * std::sqrt(static_cast<double>(env.dim())) * h / env.min_progress();
}

SlackModel slack_model(const Environment& env, double h, double dt) {
  SlackModel m;
  m.h = h;
  m.dt = dt;
  m.beta = env.max_progress();
  m.c0 = 1.0 + env.lipschitz() + env.drift_lipschitz();
  return m;
}

GridSet ReachResult::at(double r) const {
  GridSet g(set.dim(), set.h(), set.lo(), set.size());
  for (std::size_t k = 0; k < arrival.size(); ++k) {
    if (arrival[k] <= r) g.set(k);
  }
  return g;
}

GridSet reach_step(const Environment& env, const GridSet& g, double t, double dt) {
  require(dt > 0.0, ErrorKind::InvalidArgument, "time step must be positive");
  require(g.dim() == env.dim(), ErrorKind::InvalidArgument, "dimension mismatch");
  const int dim = g.dim();
  const double h = g.h();
  const long pad = static_cast<long>(std::ceil(env.max_progress() * dt / h)) + 2;
  Index lo = g.lo();
  Index size = g.size();
  for (int a = 0; a < dim; ++a) {
    lo[static_cast<std::size_t>(a)] -= pad;
    size[static_cast<std::size_t>(a)] += 2 * pad;
  }
  GridSet out(dim, h, lo, size);
  for (std::size_t k = 0; k < g.cell_count(); ++k) {
    if (!g.test(k)) continue;
    const Vec x = g.point(k);
    const double r = env.speed(x, t) * dt;
    const Vec c = x + env.drift(x, t) * dt;
    const double r2 = r * r * (1.0 + 1e-12) + 1e-24;
    const Index ci = g.nearest(c);
    const long w = static_cast<long>(std::ceil(r / h)) + 1;
    Index i{0, 0, 0};
    for (i[2] = dim > 2 ? ci[2] - w : 0; i[2] <= (dim > 2 ? ci[2] + w : 0); ++i[2]) {
      for (i[1] = dim > 1 ? ci[1] - w : 0; i[1] <= (dim > 1 ? ci[1] + w : 0); ++i[1]) {
        for (i[0] = ci[0] - w; i[0] <= ci[0] + w; ++i[0]) {
          if ((out.point(i) - c).norm2() <= r2) out.set(i);
        }
      }
    }
  }
  if (out.touches_boundary()) fail(ErrorKind::WindowOverflow, "reach_step result touches the window");
  return out.trimmed(1);
}

ReachResult reach_from(const Environment& env, const GridSet& start, double s, double t, const ReachOptions& opts) {
  require(opts.h > 0.0 && std::isfinite(opts.h), ErrorKind::InvalidArgument, "h must be positive");
  require(opts.dt >= 0.0 && std::isfinite(opts.dt), ErrorKind::InvalidArgument, "dt must be positive");
  require(t >= s, ErrorKind::InvalidArgument, "reach needs t >= s");
  require(start.dim() == env.dim(), ErrorKind::InvalidArgument, "dimension mismatch");
  require(std::abs(start.h() - opts.h) <= 1e-12 * opts.h, ErrorKind::InvalidArgument, "start grid spacing != h");
  const int dim = env.dim();
  const double h = opts.h;
  const double dt = opts.dt > 0.0 ? opts.dt : default_time_step(env, h);
  const bool drift = env.has_drift();

  const auto starts = start.occupied_indices();
  if (starts.empty()) fail(ErrorKind::EmptySet, "empty start set");
  Vec mn = start.point(starts[0]);
  Vec mx = mn;
  for (const auto& i : starts) {
    const Vec p = start.point(i);
    for (int a = 0; a < dim; ++a) {
      mn[a] = std::min(mn[a], p[a]);
      mx[a] = std::max(mx[a], p[a]);
    }
  }
  const double R = (t - s) * env.max_progress() + 2.0 * h;
  for (int a = 0; a < dim; ++a) {
    mn[a] -= R;
    mx[a] += R;
  }
  std::size_t cells = 1;
  for (int a = 0; a < dim; ++a) cells *= static_cast<std::size_t>(std::ceil((mx[a] - mn[a]) / h) + 5);
  check_window(cells, opts.max_cells);

  ReachResult res;
  res.set = GridSet::covering(dim, h, mn, mx, 2);
  res.start_set = start;
  res.s = s;
  res.t = t;
  res.h = h;
  res.dt = dt;
  res.env_fingerprint = env.fingerprint();
  res.slack = slack_model(env, h, dt);
  GridSet& box = res.set;
  res.arrival.assign(box.cell_count(), kInf);
  if (opts.record_parents) res.parent.assign(box.cell_count(), -1);

  const auto stencil = ball_stencil(box, env.max_progress() * dt);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (const auto& i : starts) {
    const std::size_t c = box.linear(i);
    res.arrival[c] = s;
    pq.push({s, c});
  }
  const double dt_cap = dt * (1.0 + 1e-12);
  while (!pq.empty()) {
    const auto [T, c] = pq.top();
    pq.pop();
    if (T > res.arrival[c]) continue;
    const Index ci = box.index_of(c);
    const Vec x = box.point(ci);
    const double a = env.speed(x, T);
    const Vec b = drift ? env.drift(x, T) : Vec{};
    const double reach_len = (a + b.norm()) * dt_cap;
    const bool inner = !on_boundary_layer(box, ci) && [&] {
      for (int d = 0; d < dim; ++d) {
        const auto u = static_cast<std::size_t>(d);
        const long r = static_cast<long>(std::ceil(reach_len / h)) + 1;
        if (ci[u] - r < box.lo()[u] || ci[u] + r > box.lo()[u] + box.size()[u] - 1) return false;
      }
      return true;
    }();
    for (const auto& o : stencil) {
      if (o.dist > reach_len) break;
      const double tau = edge_time(o.d, o.dist, a, b, drift);
      if (tau > dt_cap) continue;
      const double Tn = T + tau;
      if (Tn > t) continue;
      std::size_t y = 0;
      if (inner) {
        y = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(c) + o.delta);
      } else {
        const Index yi = add(ci, o.v);
        if (!box.in_box(yi) || on_boundary_layer(box, yi)) {
          fail(ErrorKind::WindowOverflow, "reachable set reached the window boundary");
        }
        y = box.linear(yi);
      }
      if (Tn < res.arrival[y]) {
        res.arrival[y] = Tn;
        if (opts.record_parents) res.parent[y] = static_cast<std::int64_t>(c);
        pq.push({Tn, y});
      }
    }
  }
  for (std::size_t k = 0; k < res.arrival.size(); ++k) {
    if (res.arrival[k] <= t) box.set(k);
  }
  return res;
}

ReachResult reach(const Environment& env, const Vec& x, double s, double t, const ReachOptions& opts) {
  ReachResult r = reach_from(env, GridSet::single(env.dim(), opts.h, x), s, t, opts);
  r.start = x;
  return r;
}

ReachResult reach_enlarged(const Environment& env, double s, double t, const ReachOptions& opts) {
  ReachResult r = reach_from(env, GridSet::unit_cell(env.dim(), opts.h), s, t, opts);
  r.from_unit_cell = true;
  return r;
}

ReachResult reach_backward(const Environment& env, const Vec& x, double s, double t, const ReachOptions& opts) {
  return reach(env.time_reversed(t), x, 0.0, t - s, opts);
}

ConeCheck check_cone_bounds(const Environment& env, const ReachResult& r) {
  const int dim = env.dim();
  const double tau = r.t - r.s;
  ConeCheck c;
  c.slack = r.slack.at(tau);
  const double lo_speed = env.min_progress();
  const double hi_speed = env.max_progress();
  if (r.from_unit_cell) {
    c.inner_excess = directed_excess(GridSet::ball(dim, r.h, Vec{}, tau * lo_speed), r.set);
    // d(p, B_R + Y) = max(0, d(p, Y) - R)
    for (const auto& p : r.set.occupied_points()) {
      double d2 = 0.0;
      for (int a = 0; a < dim; ++a) {
        const double e = std::max({0.0, -p[a], p[a] - 1.0});
        d2 += e * e;
      }
      c.outer_excess = std::max(c.outer_excess, std::sqrt(d2) - tau * hi_speed);
    }
  } else {
    const Vec x0 = r.set.point(r.set.nearest(r.start));
    c.inner_excess = directed_excess(GridSet::ball(dim, r.h, x0, tau * lo_speed), r.set);
    for (const auto& p : r.set.occupied_points()) {
      c.outer_excess = std::max(c.outer_excess, (p - x0).norm() - tau * hi_speed);
    }
  }
  c.outer_excess = std::max(0.0, c.outer_excess);
  return c;
}

TranslateReport translate_check(const Environment& env, const Vec& x, double t, long k, const ReachOptions& opts) {
  TranslateReport rep;
  const int dim = env.dim();
  const Vec z = floor_part(x, dim);
  const Vec xh = x - z;
  const GridSet a = reach(env, x, 0.0, t, opts).set;
  GridSet b = reach(env, xh, 0.0, t, opts).set;
  Index shift{0, 0, 0};
  for (int i = 0; i < dim; ++i) shift[static_cast<std::size_t>(i)] = std::lround(z[i] / opts.h);
  b = b.shifted(shift);
  rep.spatial = hausdorff(a, b);
  const GridSet c = reach(env, x, static_cast<double>(k), static_cast<double>(k) + t, opts).set;
  const GridSet d = reach(env.shifted(k), x, 0.0, t, opts).set;
  rep.temporal = hausdorff(c, d);
  return rep;
}

GridSet TimeField::sublevel(double t) const {
  GridSet g(box.dim(), box.h(), box.lo(), box.size());
  for (std::size_t k = 0; k < value.size(); ++k) {
    if (value[k] <= t) g.set(k);
  }
  return g;
}

double TimeField::at(const Vec& y) const {
  const Index i = box.nearest(y);
  if (!box.in_box(i)) return kInf;
  return value[box.linear(i)];
}

TimeField minimal_time(const Environment& env, const Vec& x, double radius, double h) {
  require(h > 0.0 && radius > 0.0, ErrorKind::InvalidArgument, "minimal_time needs h > 0 and radius > 0");
  if (env.has_drift()) fail(ErrorKind::InvalidArgument, "minimal_time requires b = 0");
  // Sampled autonomy check.
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int k = 0; k < 64; ++k) {
    Vec p;
    for (int a = 0; a < env.dim(); ++a) p[a] = U(rng);
    if (env.speed(p, U(rng)) != env.speed(p, U(rng))) {
      fail(ErrorKind::RequiresAutonomous, "minimal_time needs a time-independent speed field");
    }
  }
  const int dim = env.dim();
  Vec mn = x;
  Vec mx = x;
  for (int a = 0; a < dim; ++a) {
    mn[a] -= radius;
    mx[a] += radius;
  }
  TimeField f;
  f.box = GridSet::covering(dim, h, mn, mx, 1);
  f.value.assign(f.box.cell_count(), kInf);
  std::vector<Index> nbr;
  Index v{0, 0, 0};
  for (v[2] = dim > 2 ? -1 : 0; v[2] <= (dim > 2 ? 1 : 0); ++v[2]) {
    for (v[1] = dim > 1 ? -1 : 0; v[1] <= (dim > 1 ? 1 : 0); ++v[1]) {
      for (v[0] = -1; v[0] <= 1; ++v[0]) {
        if (v != Index{0, 0, 0}) nbr.push_back(v);
      }
    }
  }
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const std::size_t s0 = f.box.linear(f.box.nearest(x));
  f.value[s0] = 0.0;
  pq.push({0.0, s0});
  while (!pq.empty()) {
    const auto [T, c] = pq.top();
    pq.pop();
    if (T > f.value[c]) continue;
    const Index ci = f.box.index_of(c);
    const Vec p = f.box.point(ci);
    for (const auto& o : nbr) {
      const Index yi = add(ci, o);
      if (!f.box.in_box(yi)) continue;
      const Vec q = f.box.point(yi);
      const double w = (q - p).norm() / env.speed((p + q) * 0.5, 0.0);
      const std::size_t y = f.box.linear(yi);
      if (T + w < f.value[y]) {
        f.value[y] = T + w;
        pq.push({T + w, y});
      }
    }
  }
  return f;
}

double discrete_path_tolerance(const Environment& env, double dt) {
  const double beta = env.max_progress();
  const double A = (env.lipschitz_x() * beta + env.lipschitz_t()) * dt;
  const double B = env.drift_lipschitz() * (beta + 1.0) * dt;
  if (A >= env.alpha()) return kInf;
  return (A + B) / (env.alpha() - A);
}

Vec nearest_occupied(const GridSet& g, const Vec& x) {
  double best = kInf;
  Vec out;
  for (std::size_t k = 0; k < g.cell_count(); ++k) {
    if (!g.test(k)) continue;
    const Vec p = g.point(k);
    const double d = (p - x).norm2();
    if (d < best) {
      best = d;
      out = p;
    }
  }
  if (!std::isfinite(best)) fail(ErrorKind::EmptySet, "nearest cell of an empty grid");
  return out;
}

AdmissiblePath extract_discrete_path(const Environment& env, const ReachResult& result, const Vec& target) {
  if (!result.has_parents()) fail(ErrorKind::NoParents, "reach result was computed without parents");
  const GridSet& box = result.set;
  const Index ti = box.nearest(target);
  if (!box.in_box(ti) || !(result.arrival[box.linear(ti)] <= result.t)) {
    fail(ErrorKind::Unreachable, "target cell is not in the reachable set");
  }
  std::vector<std::size_t> chain;
  for (std::int64_t c = static_cast<std::int64_t>(box.linear(ti)); c >= 0;
       c = result.parent[static_cast<std::size_t>(c)]) {
    chain.push_back(static_cast<std::size_t>(c));
  }
  std::reverse(chain.begin(), chain.end());
  AdmissiblePath p;
  p.dim = env.dim();
  p.env_fingerprint = result.env_fingerprint;
  p.tolerance = discrete_path_tolerance(env, result.dt);
  for (std::size_t c : chain) p.knots.push_back({result.arrival[c], box.point(c)});
  if (p.knots.back().t < result.t) p.knots.push_back({result.t, p.knots.back().x});
  return p;
}

}  // namespace frontlab
