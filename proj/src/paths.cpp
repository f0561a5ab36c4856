#include "frontlab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>

#include "frontlab/config.hpp"
#include "frontlab/error.hpp"
#include "frontlab/reachable.hpp"

namespace frontlab {

Vec AdmissiblePath::at(double t) const {
  if (knots.empty()) fail(ErrorKind::InvalidPath, "empty path");
  if (t <= knots.front().t) return knots.front().x;
  if (t >= knots.back().t) return knots.back().x;
  auto it = std::upper_bound(knots.begin(), knots.end(), t, [](double v, const PathKnot& k) { return v < k.t; });
  const PathKnot& b = *it;
  const PathKnot& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  return a.x + w * (b.x - a.x);
}

void AdmissiblePath::append(const AdmissiblePath& next) {
  if (next.knots.empty()) return;
  if (knots.empty()) {
    *this = next;
    return;
  }
  const PathKnot& first = next.knots.front();
  if (std::abs(first.t - knots.back().t) > 1e-9 || (first.x - knots.back().x).norm() > 1e-9) {
    fail(ErrorKind::InvalidPath, "appended path does not start where this one ends");
  }
  for (std::size_t i = 1; i < next.knots.size(); ++i) knots.push_back(next.knots[i]);
  tolerance = std::max(tolerance, next.tolerance);
}

void AdmissiblePath::dump_csv(std::ostream& out) const {
  out << 't';
  for (int a = 0; a < dim; ++a) out << ",x" << (a + 1);
  out << '\n';
  for (const auto& k : knots) {
    out << format_double(k.t);
    for (int a = 0; a < dim; ++a) out << ',' << format_double(k.x[a]);
    out << '\n';
  }
}

PathReport validate_path(const Environment& env, const AdmissiblePath& path, int samples) {
  require(samples >= 1, ErrorKind::InvalidArgument, "samples must be positive");
  if (path.knots.empty()) fail(ErrorKind::InvalidPath, "empty path");
  PathReport rep;
  for (std::size_t i = 0; i + 1 < path.knots.size(); ++i) {
    const PathKnot& a = path.knots[i];
    const PathKnot& b = path.knots[i + 1];
    const double dur = b.t - a.t;
    if (!(dur > 0.0)) fail(ErrorKind::InvalidPath, "segment " + std::to_string(i) + " has no duration");
    const Vec v = (b.x - a.x) * (1.0 / dur);
    for (int j = 0; j <= samples; ++j) {
      const double w = static_cast<double>(j) / samples;
      const double r = a.t + w * dur;
      const Vec p = a.x + w * (b.x - a.x);
      const double ratio = (v - env.drift(p, r)).norm() / env.speed(p, r);
      if (ratio > rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.worst_segment = i;
      }
    }
  }
  rep.valid = rep.worst_ratio <= 1.0 + path.tolerance + 1e-12;
  return rep;
}

long bridge_length(int dim, double alpha) {
  return static_cast<long>(std::floor(std::sqrt(static_cast<double>(dim)) / alpha)) + 1;
}

AdmissiblePath bridge(const Environment& env, const Vec& y1, const Vec& y2, double start) {
  if (env.has_drift()) fail(ErrorKind::InvalidArgument, "bridge paths assume b = 0");
  const double alpha = env.alpha();
  const double ell = static_cast<double>(bridge_length(env.dim(), alpha));
  AdmissiblePath p;
  p.dim = env.dim();
  p.env_fingerprint = env.fingerprint();
  p.tolerance = 0.0;
  p.knots.push_back({start, y1});
  const double d = (y2 - y1).norm();
  if (d > 0.0) p.knots.push_back({start + d / alpha, y2});
  p.knots.push_back({start + ell, y2});
  return p;
}

RotationResult integrate_rotation_1d(const Environment& env, double x, double T, double step) {
  require(env.dim() == 1, ErrorKind::InvalidArgument, "rotation integration is one-dimensional");
  if (env.has_drift()) fail(ErrorKind::InvalidArgument, "rotation integration assumes b = 0");
  require(T >= 0.0 && step > 0.0, ErrorKind::InvalidArgument, "need T >= 0 and step > 0");
  const long n = std::max(1L, static_cast<long>(std::ceil(T / step)));
  const double dt = T / static_cast<double>(n);
  auto run = [&](double sign) {
    double y = x;
    for (long i = 0; i < n; ++i) {
      const double t = dt * static_cast<double>(i);
      auto f = [&](double yy, double tt) { return sign * env.speed(Vec{yy}, tt); };
      const double k1 = f(y, t);
      const double k2 = f(y + 0.5 * dt * k1, t + 0.5 * dt);
      const double k3 = f(y + 0.5 * dt * k2, t + 0.5 * dt);
      const double k4 = f(y + dt * k3, t + dt);
      y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
  };
  return {run(1.0), run(-1.0)};
}

// ---------------------------------------------------------------------------
// Realization of points of D

namespace {

AdmissiblePath translated(AdmissiblePath p, double dt, const Vec& dx) {
  for (auto& k : p.knots) {
    k.t += dt;
    k.x += dx;
  }
  return p;
}

/// Distance from v to the convex polytope c*D (c >= 0).
double distance_to_scaled(const Polytope& d, double c, const Vec& v) {
  if (c <= 0.0) return v.norm();
  return std::max(0.0, d.scaled(c).signed_distance(v));
}

}  // namespace

RealizeReport construct_realizing_path(const Environment& env, const Vec& q, long k, long m, const Polytope& d_est,
                                       double tol, const RealizeOptions& opts) {
  require(k > 0 && m > 0, ErrorKind::InvalidArgument, "horizon k and block m must be positive");
  require(tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");
  require(d_est.dim() == env.dim(), ErrorKind::InvalidArgument, "dimension mismatch");
  if (env.has_drift()) fail(ErrorKind::InvalidArgument, "path realization assumes b = 0");
  const int dim = env.dim();
  const long ell = bridge_length(dim, env.alpha());
  const long period = m + ell;

  RealizeReport rep;
  rep.decomposition = caratheodory_decompose(d_est, q);
  const auto& combo = rep.decomposition;
  const std::size_t nv = combo.size();

  ReachOptions ro;
  ro.h = opts.h;
  ro.dt = opts.dt;
  ro.record_parents = true;
  const Vec origin{};
  const bool periodic_time = env.spec().kind == EnvironmentKind::Periodic;

  // Per-block sub-path from the origin toward m * y_i on the shifted medium.
  struct Block {
    AdmissiblePath path;  // local time [0, m], starts at 0
    Vec end;
  };
  ReachResult cached;
  bool have_cache = false;
  auto block_for = [&](std::size_t i, long shift) {
    const Environment shifted = env.shifted(shift);
    if (!periodic_time || !have_cache) {
      cached = reach(shifted, origin, 0.0, static_cast<double>(m), ro);
      have_cache = true;
    }
    const Vec target = nearest_occupied(cached.set, combo[i].point * static_cast<double>(m));
    Block b;
    b.path = extract_discrete_path(shifted, cached, target);
    b.end = target;
    return b;
  };

  // Integer displacement of each block type, measured on the unshifted medium.
  std::vector<Vec> disp(nv);
  for (std::size_t i = 0; i < nv; ++i) disp[i] = floor_part(block_for(i, 0).end, dim);

  // Block counts: minimize the predicted miss after a closing run that can
  // cover (k - S(m+l)) D; ties prefer more blocks, then a smaller residual.
  const Vec goal = q * static_cast<double>(k);
  const long max_blocks = k / period;
  std::vector<long> best(nv, 0);
  double best_err = std::numeric_limits<double>::infinity();
  long best_s = -1;
  double best_res = std::numeric_limits<double>::infinity();
  std::vector<long> r(nv, 0);
  double combos = 1.0;
  for (std::size_t i = 0; i < nv; ++i) combos *= static_cast<double>(max_blocks + 1);
  auto consider = [&](const std::vector<long>& rr) {
    long s = 0;
    Vec pos;
    for (std::size_t i = 0; i < nv; ++i) {
      s += rr[i];
      pos += disp[i] * static_cast<double>(rr[i]);
    }
    const double rem = static_cast<double>(k - s * period);
    const double err = std::round(distance_to_scaled(d_est, rem, goal - pos) * 1e9) / 1e9;
    const double res = (goal - pos).norm();
    if (err < best_err || (err == best_err && (s > best_s || (s == best_s && res < best_res)))) {
      best = rr;
      best_err = err;
      best_s = s;
      best_res = res;
    }
  };
  if (combos <= 2e6) {
    std::function<void(std::size_t, long)> rec = [&](std::size_t i, long left) {
      if (i == nv) {
        consider(r);
        return;
      }
      for (long c = 0; c <= left; ++c) {
        r[i] = c;
        rec(i + 1, left - c);
      }
      r[i] = 0;
    };
    rec(0, max_blocks);
  } else {
    // Rational rounding of the Caratheodory weights with denominator S.
    for (long s = max_blocks; s >= std::max(0L, max_blocks - 50); --s) {
      std::vector<long> rr(nv);
      long used = 0;
      for (std::size_t i = 0; i < nv; ++i) {
        rr[i] = static_cast<long>(std::floor(combo[i].weight * static_cast<double>(s)));
        used += rr[i];
      }
      for (std::size_t i = 0; used < s; i = (i + 1) % nv, ++used) ++rr[i];
      consider(rr);
    }
  }
  rep.repetitions = best;
  rep.blocks = std::max(0L, best_s);
  rep.denominator = rep.blocks;

  // Interleave block types round-robin.
  std::vector<std::size_t> order;
  {
    std::vector<long> left = best;
    bool any = true;
    while (any) {
      any = false;
      for (std::size_t i = 0; i < nv; ++i) {
        if (left[i] > 0) {
          order.push_back(i);
          --left[i];
          any = true;
        }
      }
    }
  }

  AdmissiblePath path;
  path.dim = dim;
  path.env_fingerprint = env.fingerprint();
  path.knots.push_back({0.0, origin});
  Vec pos = origin;  // integral at every block start
  long clock = 0;
  for (std::size_t j = 0; j < order.size(); ++j) {
    rep.block_start_times.push_back(static_cast<double>(clock));
    const Block b = block_for(order[j], clock);
    path.append(translated(b.path, static_cast<double>(clock), pos));
    const Vec cell = floor_part(b.end, dim);
    const AdmissiblePath br = bridge(env, b.end - cell, origin, static_cast<double>(clock + m));
    path.append(translated(br, 0.0, pos + cell));
    pos += cell;
    clock += period;
  }
  // Closing run toward the remaining displacement.
  if (clock < k) {
    rep.block_start_times.push_back(static_cast<double>(clock));
    const Environment shifted = env.shifted(clock);
    const ReachResult fin = reach(shifted, origin, 0.0, static_cast<double>(k - clock), ro);
    const Vec target = nearest_occupied(fin.set, goal - pos);
    path.append(translated(extract_discrete_path(shifted, fin, target), static_cast<double>(clock), pos));
  }
  rep.path = path;
  rep.endpoint_error = (path.end_point() * (1.0 / static_cast<double>(k)) - q).norm();
  if (rep.endpoint_error > tol) {
    fail(ErrorKind::RealizationFailed, "endpoint error " + format_double(rep.endpoint_error) + " exceeds tol " +
                                           format_double(tol) + " after " + std::to_string(rep.blocks) + " blocks");
  }
  return rep;
}

}  // namespace frontlab
