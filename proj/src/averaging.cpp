#include "frontlab/averaging.hpp"

#include <algorithm>
#include <cmath>

#include "frontlab/error.hpp"
#include "frontlab/parallel.hpp"
#include "frontlab/paths.hpp"

namespace frontlab {

double LimitShapeEstimate::normalized_slack() const {
  if (schedule.empty()) return 0.0;
  const double m = static_cast<double>(schedule.back());
  return slack.at(m) / m;
}

LimitShapeEstimate estimate_limit_shape(const Environment& env, const std::vector<long>& schedule,
                                        const ReachOptions& opts) {
  require(!schedule.empty(), ErrorKind::InvalidArgument, "empty horizon schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    require(schedule[i] > 0, ErrorKind::InvalidArgument, "horizons must be positive");
    require(i == 0 || schedule[i] > schedule[i - 1], ErrorKind::InvalidArgument, "schedule must increase");
  }
  const double m_max = static_cast<double>(schedule.back());
  ReachOptions o = opts;
  o.record_parents = false;
  const ReachResult r = reach_enlarged(env, 0.0, m_max, o);

  LimitShapeEstimate est;
  est.schedule = schedule;
  est.slack = r.slack;
  const Vec origin{};
  for (long m : schedule) {
    const GridSet g = static_cast<double>(m) == m_max ? r.set : r.at(static_cast<double>(m));
    Polytope p = convex_hull(g).scaled(1.0 / static_cast<double>(m));
    est.inner_radius.push_back(std::max(0.0, -p.signed_distance(origin)));
    est.outer_radius.push_back(p.norm());
    if (!est.per_horizon.empty()) est.cauchy_gaps.push_back(hausdorff(est.per_horizon.back(), p));
    est.per_horizon.push_back(std::move(p));
  }
  est.d_est = est.per_horizon.back();
  return est;
}

SubadditivityReport check_subadditivity(const Environment& env, long m, long k, const ReachOptions& opts) {
  require(0 < k && k < m, ErrorKind::InvalidArgument, "need 0 < k < m");
  ReachOptions o = opts;
  o.record_parents = false;
  const ReachResult whole = reach_enlarged(env, 0.0, static_cast<double>(m), o);
  const GridSet first = reach_enlarged(env, 0.0, static_cast<double>(k), o).set;
  const GridSet second = reach_enlarged(env.shifted(k), 0.0, static_cast<double>(m - k), o).set;
  const GridSet sum = minkowski_sum(minkowski_sum(first, second), GridSet::reflected_cell(env.dim(), o.h));
  SubadditivityReport rep;
  rep.m = m;
  rep.k = k;
  rep.excess = directed_excess(whole.set, sum);
  rep.slack = whole.slack.at(static_cast<double>(m));
  return rep;
}

std::vector<UniformRow> uniform_convergence_report(const Environment& env, const Polytope& d_est,
                                                   const std::vector<double>& times, const std::vector<Vec>& samples,
                                                   const ReachOptions& opts) {
  require(!times.empty() && !samples.empty(), ErrorKind::InvalidArgument, "need horizons and samples");
  const double t_max = *std::max_element(times.begin(), times.end());
  require(*std::min_element(times.begin(), times.end()) > 0.0, ErrorKind::InvalidArgument, "horizons must be positive");
  std::vector<UniformRow> rows(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    rows[i].t = times[i];
    rows[i].rho.assign(samples.size(), 0.0);
  }
  ReachOptions o = opts;
  o.record_parents = false;
  parallel_for(samples.size(), [&](std::size_t k) {
    const ReachResult r = reach(env, samples[k], 0.0, t_max, o);
    for (auto& row : rows) {
      const GridSet g = row.t == t_max ? r.set : r.at(row.t);
      row.rho[k] = hausdorff(g.scaled(1.0 / row.t), d_est);
    }
  });
  for (auto& row : rows) row.sup_rho = *std::max_element(row.rho.begin(), row.rho.end());
  return rows;
}

std::vector<Vec> cell_samples(int dim, int per_axis) {
  require(dim >= 1 && dim <= kMaxDim && per_axis >= 1, ErrorKind::InvalidArgument, "bad sample request");
  std::vector<Vec> out;
  long total = 1;
  for (int a = 0; a < dim; ++a) total *= per_axis;
  for (long i = 0; i < total; ++i) {
    Vec x;
    long rest = i;
    for (int a = 0; a < dim; ++a) {
      x[a] = (static_cast<double>(rest % per_axis) + 0.5) / per_axis;
      rest /= per_axis;
    }
    out.push_back(x);
  }
  return out;
}

SandwichReport sandwich_check(const Environment& env, const Vec& x, long t, const ReachOptions& opts) {
  const long ell = bridge_length(env.dim(), env.min_progress());
  require(t > ell, ErrorKind::InvalidArgument, "horizon must exceed the bridge length");
  ReachOptions o = opts;
  o.record_parents = false;
  const ReachResult mid = reach(env, x, 0.0, static_cast<double>(t), o);
  const GridSet inner = reach_enlarged(env.shifted(ell), 0.0, static_cast<double>(t - ell), o).set;
  const GridSet outer = reach_enlarged(env, 0.0, static_cast<double>(t), o).set;
  SandwichReport rep;
  rep.lower_excess = directed_excess(inner, mid.set);
  rep.upper_excess = directed_excess(mid.set, outer);
  rep.slack = mid.slack.at(static_cast<double>(t));
  return rep;
}

SeedStudy estimate_over_seeds(const EnvironmentSpec& spec, const std::vector<std::uint64_t>& seeds,
                              const std::vector<long>& schedule, const ReachOptions& opts) {
  SeedStudy st;
  st.seeds = seeds;
  st.estimates.resize(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    EnvironmentSpec sp = spec;
    sp.seed = seeds[i];
    st.estimates[i] = estimate_limit_shape(Environment(sp), schedule, opts);
  });
  const std::size_t n = seeds.size();
  st.pairwise.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = hausdorff(st.estimates[i].d_est, st.estimates[j].d_est);
      st.pairwise[i][j] = d;
      st.pairwise[j][i] = d;
    }
  }
  return st;
}

}  // namespace frontlab
