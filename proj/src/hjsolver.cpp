#include "frontlab/hjsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frontlab/config.hpp"
#include "frontlab/error.hpp"
#include "frontlab/reachable.hpp"

namespace frontlab {

double cfl_limit(const Environment& env, double h) {
  return h / (static_cast<double>(env.dim()) * env.max_progress());
}

ScalarField solve_oscillatory_fd(const Environment& env, const SolverConfig& cfg, const SpaceFunction& u0) {
  const int dim = env.dim();
  require(cfg.eps > 0.0 && cfg.h > 0.0 && cfg.T >= 0.0, ErrorKind::InvalidArgument, "need eps, h > 0 and T >= 0");
  const double limit = cfl_limit(env, cfg.h);
  const double dt_max = cfg.dt > 0.0 ? cfg.dt : limit;
  if (dt_max > limit * (1.0 + 1e-12)) {
    fail(ErrorKind::CflViolation, "dt " + format_double(dt_max) + " exceeds the CFL limit " + format_double(limit));
  }
  std::vector<double> outs = cfg.output_times.empty() ? std::vector<double>{cfg.T} : cfg.output_times;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    require(outs[i] >= 0.0 && outs[i] <= cfg.T + 1e-12 && (i == 0 || outs[i] > outs[i - 1]),
            ErrorKind::InvalidArgument, "output times must increase within [0, T]");
  }

  const SpaceGrid inner = SpaceGrid::covering(dim, cfg.h, cfg.lo, cfg.hi);
  const long pad = static_cast<long>(std::ceil(env.max_progress() * cfg.T / cfg.h)) + 2;
  SpaceGrid full = inner;
  for (int a = 0; a < dim; ++a) {
    const auto u = static_cast<std::size_t>(a);
    full.lo[a] -= static_cast<double>(pad) * cfg.h;
    full.count[u] += 2 * pad;
  }
  const std::size_t n = full.size();
  std::array<std::ptrdiff_t, kMaxDim> stride{1, 1, 1};
  for (int a = 1; a < dim; ++a) {
    stride[static_cast<std::size_t>(a)] =
        stride[static_cast<std::size_t>(a - 1)] * static_cast<std::ptrdiff_t>(full.count[static_cast<std::size_t>(a - 1)]);
  }

  std::vector<double> u(n);
  std::vector<Vec> fast(n);  // x / eps
  for (std::size_t k = 0; k < n; ++k) {
    const Vec x = full.point(k);
    u[k] = u0(x);
    fast[k] = x * (1.0 / cfg.eps);
  }
  const bool drift = env.has_drift();

  ScalarField out;
  out.grid = inner;
  out.times = outs;
  out.values.resize(outs.size() * inner.size());
  auto record = [&](std::size_t ti) {
    for (std::size_t k = 0; k < inner.size(); ++k) {
      Index i = inner.index_of(k);
      for (int a = 0; a < dim; ++a) i[static_cast<std::size_t>(a)] += pad;
      out.values[ti * inner.size() + k] = u[full.linear(i)];
    }
  };

  std::vector<double> next(n);
  double t = 0.0;
  const double inv_h = 1.0 / cfg.h;
  for (std::size_t ti = 0; ti < outs.size(); ++ti) {
    const double span = outs[ti] - t;
    const long steps = span > 0.0 ? static_cast<long>(std::ceil(span / dt_max - 1e-9)) : 0;
    const double dt = steps > 0 ? span / static_cast<double>(steps) : 0.0;
    for (long s = 0; s < steps; ++s) {
      const double tf = t / cfg.eps;
      for (std::size_t k = 0; k < n; ++k) {
        const Index i = full.index_of(k);
        double g2 = 0.0;
        double adv = 0.0;
        const Vec b = drift ? env.drift(fast[k], tf) : Vec{};
        for (int a = 0; a < dim; ++a) {
          const auto ua = static_cast<std::size_t>(a);
          const bool has_lo = i[ua] > 0;
          const bool has_hi = i[ua] + 1 < full.count[ua];
          const double dm = has_lo ? (u[k] - u[k - static_cast<std::size_t>(stride[ua])]) * inv_h : 0.0;
          const double dp = has_hi ? (u[k + static_cast<std::size_t>(stride[ua])] - u[k]) * inv_h : 0.0;
          const double m = std::max({dm, -dp, 0.0});
          g2 += m * m;
          if (drift) adv += b[a] > 0.0 ? b[a] * dm : b[a] * dp;
        }
        next[k] = u[k] - dt * (env.speed(fast[k], tf) * std::sqrt(g2) + adv);
        if (!std::isfinite(next[k])) fail(ErrorKind::NumericBlowup, "non-finite value at t=" + format_double(t));
      }
      u.swap(next);
      t += dt;
    }
    t = outs[ti];
    record(ti);
  }
  return out;
}

namespace {

/// min of f(eps * z) over the cells z of the backward set {z : x/eps in R(z)}.
double backward_min(const Environment& reversed, const Vec& x, double horizon, double eps, double h,
                    const SpaceFunction& f) {
  ReachOptions o;
  o.h = h;
  const ReachResult r = reach(reversed, x * (1.0 / eps), 0.0, horizon, o);
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& z : r.set.occupied_points()) best = std::min(best, f(z * eps));
  return best;
}

}  // namespace

std::vector<double> solve_by_control(const Environment& env, const SolverConfig& cfg, const SpaceFunction& u0,
                                     const std::vector<SpaceTimePoint>& points) {
  require(cfg.eps > 0.0 && cfg.control_h > 0.0, ErrorKind::InvalidArgument, "need eps > 0 and control_h > 0");
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    require(p.t >= 0.0, ErrorKind::InvalidArgument, "negative time");
    if (p.t == 0.0) {
      out.push_back(u0(p.x));
      continue;
    }
    const double horizon = p.t / cfg.eps;
    out.push_back(backward_min(env.time_reversed(horizon), p.x, horizon, cfg.eps, cfg.control_h, u0));
  }
  return out;
}

std::vector<double> solve_noncoercive(const Environment& env, const SolverConfig& cfg, const SpaceTimeFunction& v0,
                                      const std::vector<NoncoercivePoint>& points) {
  require(cfg.eps > 0.0 && cfg.control_h > 0.0, ErrorKind::InvalidArgument, "need eps > 0 and control_h > 0");
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    require(p.t >= 0.0, ErrorKind::InvalidArgument, "negative time");
    const double base = p.xn1 - p.t;
    const SpaceFunction data = [&](const Vec& y) { return v0(y, base); };
    if (p.t == 0.0) {
      out.push_back(data(p.x));
      continue;
    }
    // reversed time r runs from x_{n+1}/eps back to (x_{n+1} - t)/eps
    const Environment rev = env.time_reversed(p.xn1 / cfg.eps);
    out.push_back(backward_min(rev, p.x, p.t / cfg.eps, cfg.eps, cfg.control_h, data));
  }
  return out;
}

std::vector<TrendRow> homogenization_trend(const Environment& env, const EffectiveModel& model,
                                           const SpaceFunction& u0, const std::vector<double>& eps_list,
                                           const SpaceGrid& grid, const std::vector<double>& times,
                                           const SolverConfig& base) {
  const ScalarField bar = solve_homogenized(model, u0, grid, times);
  std::vector<SpaceTimePoint> pts;
  for (double t : times) {
    for (std::size_t k = 0; k < grid.size(); ++k) pts.push_back({grid.point(k), t});
  }
  std::vector<TrendRow> rows;
  for (double eps : eps_list) {
    SolverConfig cfg = base;
    cfg.eps = eps;
    const auto vals = solve_by_control(env, cfg, u0, pts);
    TrendRow row;
    row.eps = eps;
    for (std::size_t i = 0; i < pts.size(); ++i) row.error = std::max(row.error, std::abs(vals[i] - bar.values[i]));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace frontlab
