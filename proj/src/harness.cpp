#include "frontlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "frontlab/averaging.hpp"
#include "frontlab/effective.hpp"
#include "frontlab/error.hpp"
#include "frontlab/hjsolver.hpp"
#include "frontlab/paths.hpp"
#include "frontlab/reachable.hpp"

namespace frontlab {

namespace {

constexpr const char* kSection = "experiment";

struct NamedKind {
  const char* name;
  ExperimentKind kind;
};

constexpr NamedKind kKinds[] = {
    {"reach", ExperimentKind::Reach},           {"average", ExperimentKind::Average},
    {"rotation", ExperimentKind::Rotation},     {"homogenize", ExperimentKind::Homogenize},
    {"drift", ExperimentKind::Drift},           {"noncoercive", ExperimentKind::Noncoercive},
};

std::vector<std::string_view> allowed_keys(ExperimentKind k) {
  std::vector<std::string_view> keys{"name", "h", "dt"};
  auto add = [&](std::initializer_list<std::string_view> more) { keys.insert(keys.end(), more); };
  switch (k) {
    case ExperimentKind::Reach:
      add({"from_cell", "start", "s", "t"});
      break;
    case ExperimentKind::Average:
      add({"schedule", "uniform_times", "samples_per_axis", "seeds", "subadditivity"});
      break;
    case ExperimentKind::Drift:
      add({"schedule"});
      break;
    case ExperimentKind::Rotation:
      add({"x", "horizon", "step"});
      break;
    case ExperimentKind::Homogenize:
      add({"schedule", "eps", "control_h", "reach_h", "T", "lo", "hi", "sample_h", "times", "cap", "points",
           "point_seed"});
      break;
    case ExperimentKind::Noncoercive:
      add({"eps", "control_h", "T", "lo", "hi", "cap", "amp", "points", "point_seed"});
      break;
  }
  return keys;
}

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::InvalidConfig, what); }

void check(bool cond, const std::string& what) {
  if (!cond) bad(what);
}

Vec vec_of(const std::vector<double>& v, int dim, const std::string& key) {
  check(static_cast<int>(v.size()) == dim, "'" + key + "' needs " + std::to_string(dim) + " values");
  Vec out;
  for (int i = 0; i < dim; ++i) out[i] = v[static_cast<std::size_t>(i)];
  return out;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Json slack_json(const SlackModel& s) {
  Json j;
  j["h"] = s.h;
  j["dt"] = s.dt;
  j["beta"] = s.beta;
  j["c0"] = s.c0;
  return j;
}

Json op(const std::string& name, Json params) {
  Json j;
  j["name"] = name;
  j["params"] = std::move(params);
  return j;
}

Json long_array(const std::vector<long>& v) {
  Json a = Json::array();
  for (long x : v) a.push_back(x);
  return a;
}

Json double_array(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

std::vector<std::string> coord_header(int dim) {
  std::vector<std::string> h;
  for (int i = 1; i <= dim; ++i) h.push_back("x" + std::to_string(i));
  return h;
}

/// Collects output files under out_dir/<name>-<hash>*.
class Writer {
 public:
  Writer(std::string dir, std::string stem) : dir_(std::move(dir)), stem_(std::move(stem)) {}

  std::string write(const std::string& suffix, const std::function<void(std::ostream&)>& body) {
    const std::string file = stem_ + suffix;
    const auto path = std::filesystem::path(dir_) / file;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
    body(out);
    out.flush();
    if (!out) fail(ErrorKind::Io, "write failed for '" + path.string() + "'");
    files_.push_back(path.string());
    names_.push_back(file);
    return file;
  }

  std::string csv(const std::string& series, const CsvTable& t) {
    return write("-" + series + ".csv", [&](std::ostream& o) { t.write(o); });
  }

  [[nodiscard]] const std::vector<std::string>& files() const { return files_; }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }

 private:
  std::string dir_;
  std::string stem_;
  std::vector<std::string> files_;
  std::vector<std::string> names_;
};

ReachOptions reach_opts(double h, double dt) {
  ReachOptions o;
  o.h = h;
  o.dt = dt;
  return o;
}

Json shape_json(const LimitShapeEstimate& est) {
  Json j;
  j["schedule"] = long_array(est.schedule);
  j["cauchy_gaps"] = double_array(est.cauchy_gaps);
  j["inner_radius"] = double_array(est.inner_radius);
  j["outer_radius"] = double_array(est.outer_radius);
  j["normalized_slack"] = est.normalized_slack();
  j["d_est"] = polytope_json(est.d_est);
  return j;
}

CsvTable shape_table(const Polytope& p) {
  CsvTable t(coord_header(p.dim()));
  for (const Vec& v : p.vertices()) {
    std::vector<double> row;
    for (int i = 0; i < p.dim(); ++i) row.push_back(v[i]);
    t.add_row(row);
  }
  return t;
}

CsvTable gaps_table(const LimitShapeEstimate& est) {
  CsvTable t({"m", "gap", "inner_radius", "outer_radius"});
  for (std::size_t i = 0; i < est.schedule.size(); ++i) {
    const double gap = i == 0 ? std::numeric_limits<double>::quiet_NaN() : est.cauchy_gaps[i - 1];
    t.add_row({static_cast<double>(est.schedule[i]), gap, est.inner_radius[i], est.outer_radius[i]});
  }
  return t;
}

void run_reach(const ExperimentConfig& c, const Environment& env, Json& ops, Json& out, Writer& w) {
  const ReachOptions o = reach_opts(c.h, c.dt);
  const ReachResult r = c.from_cell ? reach_enlarged(env, c.s, c.t, o) : reach(env, c.start, c.s, c.t, o);
  Json p;
  p["from_cell"] = c.from_cell;
  if (!c.from_cell) p["start"] = vec_json(c.start, env.dim());
  p["s"] = c.s;
  p["t"] = c.t;
  p["h"] = r.h;
  p["dt"] = r.dt;
  ops.push_back(op(c.from_cell ? "reach_enlarged" : "reach", p));
  const ConeCheck cone = check_cone_bounds(env, r);
  ops.push_back(op("check_cone_bounds", Json::object()));

  out["occupied_cells"] = r.set.occupied_count();
  out["radius"] = r.set.radius();
  Json lo = Json::array();
  Json hi = Json::array();
  for (int a = 0; a < env.dim(); ++a) {
    lo.push_back(r.set.min_coord(a));
    hi.push_back(r.set.max_coord(a));
  }
  out["min_coord"] = lo;
  out["max_coord"] = hi;
  Json cj;
  cj["inner_excess"] = cone.inner_excess;
  cj["outer_excess"] = cone.outer_excess;
  cj["slack"] = cone.slack;
  cj["ok"] = cone.ok();
  out["cone"] = cj;
  out["slack_model"] = slack_json(r.slack);
  const GridSet trimmed = r.set.trimmed(1);
  w.write("-set.txt", [&](std::ostream& os) { trimmed.dump(os); });
  const Polytope hull = convex_hull(r.set);
  w.csv("hull", shape_table(hull));
}

void run_average(const ExperimentConfig& c, const Environment& env, Json& ops, Json& out, Writer& w) {
  const ReachOptions o = reach_opts(c.h, c.dt);
  const LimitShapeEstimate est = estimate_limit_shape(env, c.schedule, o);
  Json p;
  p["schedule"] = long_array(c.schedule);
  p["h"] = c.h;
  p["dt"] = est.slack.dt;
  ops.push_back(op("estimate_limit_shape", p));
  out["limit_shape"] = shape_json(est);
  out["slack_model"] = slack_json(est.slack);
  w.csv("gaps", gaps_table(est));
  w.csv("shape", shape_table(est.d_est));

  Json sub = Json::array();
  for (const auto& [m, k] : c.subadditivity) {
    const SubadditivityReport rep = check_subadditivity(env, m, k, o);
    Json p2;
    p2["m"] = m;
    p2["k"] = k;
    ops.push_back(op("check_subadditivity", p2));
    Json r;
    r["m"] = rep.m;
    r["k"] = rep.k;
    r["excess"] = rep.excess;
    r["slack"] = rep.slack;
    r["ok"] = rep.excess <= 2.0 * rep.slack;
    sub.push_back(r);
  }
  out["subadditivity"] = sub;

  Json uni = Json::array();
  if (!c.uniform_times.empty()) {
    const auto samples = cell_samples(env.dim(), c.samples_per_axis);
    const auto rows = uniform_convergence_report(env, est.d_est, c.uniform_times, samples, o);
    Json p3;
    p3["times"] = double_array(c.uniform_times);
    p3["samples_per_axis"] = c.samples_per_axis;
    ops.push_back(op("uniform_convergence_report", p3));
    CsvTable t({"t", "sup_rho"});
    for (const auto& row : rows) {
      Json r;
      r["t"] = row.t;
      r["sup_rho"] = row.sup_rho;
      r["rho"] = double_array(row.rho);
      uni.push_back(r);
      t.add_row({row.t, row.sup_rho});
    }
    w.csv("uniform", t);
  }
  out["uniform"] = uni;

  Json seeds = Json::array();
  if (!c.seeds.empty()) {
    const SeedStudy st = estimate_over_seeds(env.spec(), c.seeds, c.schedule, o);
    Json p4;
    Json sl = Json::array();
    for (auto s : c.seeds) sl.push_back(s);
    p4["seeds"] = sl;
    ops.push_back(op("estimate_over_seeds", p4));
    CsvTable t({"seed_i", "seed_j", "rho"});
    for (std::size_t i = 0; i < st.seeds.size(); ++i) {
      Json r;
      r["seed"] = st.seeds[i];
      r["d_est"] = polytope_json(st.estimates[i].d_est);
      r["pairwise"] = double_array(st.pairwise[i]);
      seeds.push_back(r);
      for (std::size_t j = 0; j < st.seeds.size(); ++j) {
        t.add_row({static_cast<double>(st.seeds[i]), static_cast<double>(st.seeds[j]), st.pairwise[i][j]});
      }
    }
    w.csv("seeds", t);
  }
  out["seed_study"] = seeds;
}

double harmonic_mean_speed_1d(const Environment& env) {
  // composite Simpson on [0,1] of 1/a(x)
  const int n = 4096;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += wgt / env.speed(Vec{static_cast<double>(i) / n}, 0.0);
  }
  return 1.0 / (s / (3.0 * n));
}

void run_rotation(const ExperimentConfig& c, const Environment& env, Json& ops, Json& out, Writer& w) {
  const RotationResult r = integrate_rotation_1d(env, c.x, c.horizon, c.step);
  Json p;
  p["x"] = c.x;
  p["T"] = c.horizon;
  p["step"] = c.step;
  ops.push_back(op("integrate_rotation_1d", p));
  out["right"] = r.right;
  out["left"] = r.left;
  out["rotation_right"] = (r.right - c.x) / c.horizon;
  out["rotation_left"] = (c.x - r.left) / c.horizon;
  if (env.is_autonomous()) out["harmonic_mean_speed"] = harmonic_mean_speed_1d(env);
  CsvTable t({"T", "right", "left"});
  t.add_row({c.horizon, r.right, r.left});
  w.csv("rotation", t);
}

SpaceFunction capped_cone(double cap) {
  return [cap](const Vec& y) { return std::min(y.norm(), cap); };
}

std::vector<Vec> random_points(const ExperimentConfig& c, int dim, std::mt19937_64& rng) {
  std::vector<Vec> pts;
  for (int k = 0; k < c.points; ++k) {
    Vec x;
    for (int i = 0; i < dim; ++i) x[i] = c.lo[i] + (c.hi[i] - c.lo[i]) * uniform01(rng);
    pts.push_back(x);
  }
  return pts;
}

void run_homogenize(const ExperimentConfig& c, const Environment& env, Json& ops, Json& out, Writer& w) {
  const int n = env.dim();
  const LimitShapeEstimate est = estimate_limit_shape(env, c.schedule, reach_opts(c.reach_h, 0.0));
  Json p;
  p["schedule"] = long_array(c.schedule);
  p["h"] = c.reach_h;
  ops.push_back(op("estimate_limit_shape", p));
  out["limit_shape"] = shape_json(est);

  const EffectiveModel model{est.d_est, est.normalized_slack()};
  const SpaceFunction u0 = capped_cone(c.cap);
  const SpaceGrid grid = SpaceGrid::covering(n, c.sample_h, c.lo, c.hi);
  SolverConfig base;
  base.h = c.h;
  base.lo = c.lo;
  base.hi = c.hi;
  base.T = c.T;
  base.dt = c.dt;
  base.control_h = c.control_h;
  const auto rows = homogenization_trend(env, model, u0, c.eps_list, grid, c.times, base);
  Json p2;
  p2["eps"] = double_array(c.eps_list);
  p2["sample_h"] = c.sample_h;
  p2["times"] = double_array(c.times);
  p2["control_h"] = c.control_h;
  ops.push_back(op("homogenization_trend", p2));

  std::mt19937_64 rng(c.point_seed);
  const auto xs = random_points(c, n, rng);
  std::vector<SpaceTimePoint> pts;
  for (const Vec& x : xs) pts.push_back(SpaceTimePoint{x, c.T * (0.25 + 0.75 * uniform01(rng))});

  Json trend = Json::array();
  CsvTable t({"eps", "error", "fd_control_gap"});
  bool decreasing = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double gap = 0.0;
    if (!pts.empty()) {
      SolverConfig cfg = base;
      cfg.eps = rows[i].eps;
      std::vector<double> ts;
      for (const auto& q : pts) ts.push_back(q.t);
      std::sort(ts.begin(), ts.end());
      ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
      cfg.output_times = ts;
      const ScalarField fd = solve_oscillatory_fd(env, cfg, u0);
      const auto ctl = solve_by_control(env, cfg, u0, pts);
      for (std::size_t k = 0; k < pts.size(); ++k) {
        gap = std::max(gap, std::abs(fd.interpolate(fd.time_index(pts[k].t), pts[k].x) - ctl[k]));
      }
      Json p3;
      p3["eps"] = cfg.eps;
      p3["h"] = cfg.h;
      p3["points"] = c.points;
      ops.push_back(op("solve_oscillatory_fd", p3));
      ops.push_back(op("solve_by_control", p3));
    }
    Json r;
    r["eps"] = rows[i].eps;
    r["error"] = rows[i].error;
    r["fd_control_gap"] = gap;
    trend.push_back(r);
    t.add_row({rows[i].eps, rows[i].error, gap});
    if (i > 0 && !(rows[i].error < rows[i - 1].error)) decreasing = false;
  }
  out["trend"] = trend;
  out["error_decreasing"] = decreasing;
  w.csv("trend", t);

  const ScalarField ubar = solve_homogenized(model, u0, grid, c.times);
  ops.push_back(op("solve_homogenized", Json::object()));
  w.write("-ubar.csv", [&](std::ostream& os) { ubar.dump_csv(os); });
}

Polytope ball_polytope(int dim, const Vec& center, double r) {
  std::vector<Vec> pts;
  if (dim == 1) {
    pts = {center - Vec{r}, center + Vec{r}};
  } else if (dim == 2) {
    for (int i = 0; i < 1024; ++i) {
      const double th = 2.0 * std::numbers::pi * i / 1024;
      pts.push_back(center + Vec{r * std::cos(th), r * std::sin(th)});
    }
  } else {
    const int m = 2000;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < m; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / m;
      const double rr = std::sqrt(1.0 - z * z);
      pts.push_back(center + Vec{r * rr * std::cos(golden * i), r * rr * std::sin(golden * i), r * z});
    }
  }
  return Polytope::hull(dim, pts);
}

void run_drift(const ExperimentConfig& c, const Environment& env, Json& ops, Json& out, Writer& w) {
  const LimitShapeEstimate est = estimate_limit_shape(env, c.schedule, reach_opts(c.h, c.dt));
  Json p;
  p["schedule"] = long_array(c.schedule);
  p["h"] = c.h;
  p["dt"] = est.slack.dt;
  ops.push_back(op("estimate_limit_shape", p));
  out["limit_shape"] = shape_json(est);
  out["slack_model"] = slack_json(est.slack);
  out["drift_bound"] = env.drift_bound();
  const auto& spec = env.spec();
  const bool constant = spec.modes.empty() && spec.drift->modes.empty();
  if (constant) {
    // a and b constant: D = b + ball(a)
    const double a = env.speed(Vec{}, 0.0);
    const Polytope ref = ball_polytope(env.dim(), spec.drift->constant, a);
    const double m = static_cast<double>(c.schedule.back());
    Json r;
    r["speed"] = a;
    r["drift"] = vec_json(spec.drift->constant, env.dim());
    r["hausdorff"] = hausdorff(est.d_est, ref);
    r["bound"] = est.normalized_slack() + std::sqrt(static_cast<double>(env.dim())) / m;
    out["reference"] = r;
  }
  w.csv("gaps", gaps_table(est));
  w.csv("shape", shape_table(est.d_est));
}

void run_noncoercive(const ExperimentConfig& c, const Environment& env, Json& ops, Json& out, Writer& w) {
  const int n = env.dim();
  const double cap = c.cap;
  const double amp = c.amp;
  const SpaceTimeFunction v0 = [cap, amp](const Vec& y, double s) {
    return std::min(y.norm(), cap) + amp * std::sin(2.0 * std::numbers::pi * s);
  };
  SolverConfig cfg;
  cfg.eps = c.eps_list.front();
  cfg.lo = c.lo;
  cfg.hi = c.hi;
  cfg.T = c.T;
  cfg.control_h = c.control_h;

  // x_{n+1} = t + k eps puts the data time on the integer shift group, so
  // each value must match the coercive solve in the environment shifted by k
  std::mt19937_64 rng(c.point_seed);
  const auto xs = random_points(c, n, rng);
  std::vector<NoncoercivePoint> pts;
  std::vector<long> shifts;
  for (const Vec& x : xs) {
    const double t = c.T * (0.25 + 0.75 * uniform01(rng));
    const long k = static_cast<long>(std::floor(9.0 * uniform01(rng))) - 4;
    pts.push_back(NoncoercivePoint{x, t + static_cast<double>(k) * cfg.eps, t});
    shifts.push_back(k);
  }
  const auto v = solve_noncoercive(env, cfg, v0, pts);
  Json p;
  p["eps"] = cfg.eps;
  p["control_h"] = cfg.control_h;
  p["points"] = c.points;
  ops.push_back(op("solve_noncoercive", p));

  double worst = 0.0;
  std::vector<double> u(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto& q = pts[k];
    const double s = q.xn1 - q.t;
    const SpaceFunction data = [&v0, s](const Vec& y) { return v0(y, s); };
    u[k] = solve_by_control(env.shifted(shifts[k]), cfg, data, {SpaceTimePoint{q.x, q.t}}).front();
    worst = std::max(worst, std::abs(u[k] - v[k]));
  }
  ops.push_back(op("solve_by_control", p));
  out["points"] = pts.size();
  out["max_identity_gap"] = worst;

  std::vector<std::string> header = coord_header(n);
  header.insert(header.end(), {"xn1", "t", "shift", "v", "control"});
  CsvTable t(header);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    std::vector<double> row;
    for (int i = 0; i < n; ++i) row.push_back(pts[k].x[i]);
    row.insert(row.end(), {pts[k].xn1, pts[k].t, static_cast<double>(shifts[k]), v[k], u[k]});
    t.add_row(row);
  }
  w.csv("points", t);
}

}  // namespace

std::optional<ExperimentKind> experiment_from_name(std::string_view name) {
  for (const auto& k : kKinds) {
    if (name == k.name) return k.kind;
  }
  return std::nullopt;
}

std::string experiment_name(ExperimentKind k) {
  for (const auto& e : kKinds) {
    if (e.kind == k) return e.name;
  }
  return "unknown";
}

ExperimentConfig load_experiment(const ConfigFile& cfg, std::optional<std::uint64_t> seed_override) {
  ExperimentConfig c;
  const auto name = cfg.get(kSection, "name");
  check(name.has_value(), "missing [experiment] name");
  const auto kind = experiment_from_name(trim(*name));
  check(kind.has_value(), "unknown experiment '" + *name + "'");
  c.kind = *kind;
  cfg.check_keys(kSection, allowed_keys(c.kind));

  c.env = parse_environment(cfg);
  if (seed_override) c.env.seed = *seed_override;
  const Environment env(c.env);  // validates the spec
  const int n = c.env.dimension;

  auto dbl = [&](const char* key, double fallback) {
    try {
      return cfg.get_double(kSection, key, fallback);
    } catch (const Error& e) {
      bad(e.what());
    }
  };
  auto lng = [&](const char* key, long fallback) {
    try {
      return cfg.get_long(kSection, key, fallback);
    } catch (const Error& e) {
      bad(e.what());
    }
  };
  auto dbls = [&](const char* key, std::vector<double> fallback) {
    if (!cfg.get(kSection, key)) return fallback;
    try {
      return cfg.get_doubles(kSection, key);
    } catch (const Error& e) {
      bad(e.what());
    }
  };
  auto longs = [&](const char* key, std::vector<long> fallback) {
    const auto text = cfg.get(kSection, key);
    if (!text) return fallback;
    std::vector<long> out;
    std::istringstream is(*text);
    std::string tok;
    try {
      while (is >> tok) out.push_back(parse_long(tok, key));
    } catch (const Error& e) {
      bad(e.what());
    }
    return out;
  };

  c.h = dbl("h", c.h);
  c.dt = dbl("dt", c.dt);
  check(c.h > 0.0 && std::isfinite(c.h), "h must be positive");
  check(c.dt >= 0.0 && std::isfinite(c.dt), "dt must be non-negative");

  switch (c.kind) {
    case ExperimentKind::Reach: {
      c.from_cell = lng("from_cell", 0) != 0;
      c.start = vec_of(dbls("start", std::vector<double>(static_cast<std::size_t>(n), 0.0)), n, "start");
      c.s = dbl("s", c.s);
      c.t = dbl("t", c.t);
      check(std::isfinite(c.s) && std::isfinite(c.t) && c.t >= c.s, "reach needs s <= t");
      break;
    }
    case ExperimentKind::Average:
    case ExperimentKind::Drift: {
      c.schedule = longs("schedule", c.schedule);
      check(!c.schedule.empty(), "schedule must not be empty");
      for (std::size_t i = 0; i < c.schedule.size(); ++i) {
        check(c.schedule[i] > 0, "schedule entries must be positive");
        check(i == 0 || c.schedule[i] > c.schedule[i - 1], "schedule must be increasing");
      }
      if (c.kind == ExperimentKind::Drift) {
        check(c.env.drift.has_value(), "drift experiment needs a [drift] section");
        break;
      }
      c.uniform_times = dbls("uniform_times", {});
      check(strictly_increasing(c.uniform_times), "uniform_times must be increasing");
      for (double t : c.uniform_times) check(t > 0.0, "uniform_times must be positive");
      c.samples_per_axis = static_cast<int>(lng("samples_per_axis", c.samples_per_axis));
      check(c.samples_per_axis >= 1 && c.samples_per_axis <= 64, "samples_per_axis must be in [1, 64]");
      for (long s : longs("seeds", {})) {
        check(s >= 0, "seeds must be non-negative");
        c.seeds.push_back(static_cast<std::uint64_t>(s));
      }
      const auto pairs = longs("subadditivity", {});
      check(pairs.size() % 2 == 0, "subadditivity takes pairs 'm k'");
      for (std::size_t i = 0; i < pairs.size(); i += 2) {
        check(0 < pairs[i + 1] && pairs[i + 1] < pairs[i], "subadditivity pairs need 0 < k < m");
        c.subadditivity.emplace_back(pairs[i], pairs[i + 1]);
      }
      break;
    }
    case ExperimentKind::Rotation: {
      check(n == 1, "rotation needs a 1D environment");
      check(!c.env.drift.has_value(), "rotation needs an environment without drift");
      c.x = dbl("x", c.x);
      c.horizon = dbl("horizon", c.horizon);
      c.step = dbl("step", c.step);
      check(std::isfinite(c.x), "x must be finite");
      check(c.horizon > 0.0 && std::isfinite(c.horizon), "horizon must be positive");
      check(c.step > 0.0 && c.step <= c.horizon, "step must be in (0, horizon]");
      break;
    }
    case ExperimentKind::Homogenize:
    case ExperimentKind::Noncoercive: {
      c.eps_list = dbls("eps", c.eps_list);
      check(!c.eps_list.empty(), "eps must not be empty");
      for (double e : c.eps_list) check(e > 0.0 && std::isfinite(e), "eps entries must be positive");
      c.control_h = dbl("control_h", c.control_h);
      check(c.control_h > 0.0, "control_h must be positive");
      c.T = dbl("T", c.T);
      check(c.T > 0.0 && std::isfinite(c.T), "T must be positive");
      c.lo = vec_of(dbls("lo", std::vector<double>(static_cast<std::size_t>(n), -1.0)), n, "lo");
      c.hi = vec_of(dbls("hi", std::vector<double>(static_cast<std::size_t>(n), 1.0)), n, "hi");
      for (int i = 0; i < n; ++i) check(c.lo[i] < c.hi[i], "lo must be below hi");
      c.cap = dbl("cap", c.cap);
      check(c.cap > 0.0, "cap must be positive");
      c.points = static_cast<int>(lng("points", c.points));
      check(c.points >= 0, "points must be non-negative");
      const long ps = lng("point_seed", static_cast<long>(c.point_seed));
      check(ps >= 0, "point_seed must be non-negative");
      c.point_seed = static_cast<std::uint64_t>(ps);
      if (c.kind == ExperimentKind::Noncoercive) {
        c.amp = dbl("amp", c.amp);
        check(std::isfinite(c.amp), "amp must be finite");
        break;
      }
      std::sort(c.eps_list.begin(), c.eps_list.end(), std::greater<>());
      c.schedule = longs("schedule", {100});
      check(!c.schedule.empty(), "schedule must not be empty");
      for (std::size_t i = 0; i < c.schedule.size(); ++i) {
        check(c.schedule[i] > 0 && (i == 0 || c.schedule[i] > c.schedule[i - 1]),
              "schedule must be positive and increasing");
      }
      c.reach_h = dbl("reach_h", c.reach_h);
      check(c.reach_h > 0.0, "reach_h must be positive");
      c.sample_h = dbl("sample_h", c.sample_h);
      check(c.sample_h > 0.0, "sample_h must be positive");
      c.times = dbls("times", c.times);
      check(!c.times.empty() && strictly_increasing(c.times), "times must be increasing");
      check(c.times.front() > 0.0 && c.times.back() <= c.T, "times must lie in (0, T]");
      break;
    }
  }

  // canonical text: experiment name, sorted knob entries, environment
  std::map<std::string, std::string> knobs;
  for (const auto& e : cfg.entries()) {
    if (e.section == kSection && e.key != "name") knobs[e.key] = trim(e.value);
  }
  std::ostringstream os;
  os << "experiment=" << experiment_name(c.kind) << '\n';
  for (const auto& [k, v] : knobs) os << k << '=' << v << '\n';
  os << to_config_text(c.env);
  c.canonical = os.str();
  return c;
}

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(cfg.canonical)));
  return buf;
}

RunOutput run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  const Environment env(cfg.env);
  const std::string name = experiment_name(cfg.kind);
  const std::string hash = config_hash(cfg);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) fail(ErrorKind::Io, "cannot create output directory '" + out_dir + "'");

  Writer w(out_dir, name + "-" + hash);
  Json ops = Json::array();
  Json outputs = Json::object();
  switch (cfg.kind) {
    case ExperimentKind::Reach: run_reach(cfg, env, ops, outputs, w); break;
    case ExperimentKind::Average: run_average(cfg, env, ops, outputs, w); break;
    case ExperimentKind::Rotation: run_rotation(cfg, env, ops, outputs, w); break;
    case ExperimentKind::Homogenize: run_homogenize(cfg, env, ops, outputs, w); break;
    case ExperimentKind::Drift: run_drift(cfg, env, ops, outputs, w); break;
    case ExperimentKind::Noncoercive: run_noncoercive(cfg, env, ops, outputs, w); break;
  }

  Json inputs;
  {
    Json exp;
    std::istringstream is(cfg.canonical);
    std::string line;
    while (std::getline(is, line) && line.find('[') != 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      exp[line.substr(0, eq)] = line.substr(eq + 1);
    }
    inputs["experiment"] = exp;
    inputs["environment"] = to_config_text(cfg.env);
    inputs["seed"] = cfg.env.seed;
  }

  RunOutput res;
  Json& r = res.report;
  r["experiment"] = name;
  r["config_hash"] = hash;
  r["inputs"] = inputs;
  r["operations"] = ops;
  r["outputs"] = outputs;
  Json files = Json::array();
  for (const auto& f : w.names()) files.push_back(f);
  r["files"] = files;
  r["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  w.write(".json", [&](std::ostream& os) { write_json(os, r); });
  res.files = w.files();
  return res;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidSpec: return 2;
    case ErrorKind::Io: return 4;
    default: return 3;
  }
}

int run_command(const std::string& subcommand, const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed, std::ostream& err) {
  const auto kind = experiment_from_name(subcommand);
  if (!kind) {
    err << "error: unknown experiment '" << subcommand << "'\n";
    return 2;
  }
  ExperimentConfig cfg;
  try {
    cfg = load_experiment(ConfigFile::load(config_path), seed);
    if (cfg.kind != *kind) {
      err << "error: config describes '" << experiment_name(cfg.kind) << "', not '" << subcommand << "'\n";
      return 2;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind()) == 3 ? 2 : exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    (void)run_experiment(cfg, out_dir);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace frontlab
