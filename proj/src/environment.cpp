#include "frontlab/environment.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "frontlab/error.hpp"

namespace frontlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kDriftStreamBase = 1000;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double spatial_arg(const std::array<int, kMaxDim>& freq, const Vec& xhat, int dim, double phase) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += freq[static_cast<std::size_t>(i)] * xhat[i];
  return kTwoPi * s + phase;
}

double freq_norm(const std::array<int, kMaxDim>& freq) {
  double s = 0.0;
  for (int k : freq) s += static_cast<double>(k) * k;
  return std::sqrt(s);
}

void validate(const EnvironmentSpec& s) {
  require(s.dimension >= 1 && s.dimension <= kMaxDim, ErrorKind::InvalidSpec, "dimension must be 1, 2 or 3");
  require(s.alpha > 0.0 && std::isfinite(s.alpha), ErrorKind::InvalidSpec, "alpha must be positive");
  require(s.beta >= s.alpha && std::isfinite(s.beta), ErrorKind::InvalidSpec, "beta must be >= alpha");
  require(static_cast<int>(s.modes.size()) <= kMaxModes, ErrorKind::InvalidSpec, "at most 8 speed modes");
  double amp = 0.0;
  for (const auto& m : s.modes) {
    for (int i = s.dimension; i < kMaxDim; ++i) {
      require(m.freq[static_cast<std::size_t>(i)] == 0, ErrorKind::InvalidSpec,
              "mode frequency has components beyond the dimension");
    }
    amp += std::abs(m.amplitude);
  }
  require(amp <= 1.0 + 1e-12, ErrorKind::InvalidSpec, "sum of |mode amplitudes| must be <= 1");
  if (s.drift) {
    const auto& d = *s.drift;
    require(d.eta > 0.0, ErrorKind::InvalidSpec, "drift margin eta must be positive");
    require(static_cast<int>(d.modes.size()) <= kMaxModes, ErrorKind::InvalidSpec, "at most 8 drift modes");
    double bound = d.constant.norm();
    for (const auto& m : d.modes) bound += m.amplitude.norm();
    require(s.alpha - bound >= d.eta, ErrorKind::InvalidSpec,
            "drift violates alpha - sup|b| >= eta (sup|b| bound " + format_double(bound) + ")");
  }
}

}  // namespace

double random_coefficient(std::uint64_t seed, int stream, long tick) {
  std::uint64_t z = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
  z = splitmix64(z ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL));
  z = splitmix64(z ^ static_cast<std::uint64_t>(tick));
  const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

Environment::Environment(EnvironmentSpec spec) {
  validate(spec);
  const double half = 0.5 * (spec.beta - spec.alpha);
  for (const auto& m : spec.modes) {
    const double a = std::abs(m.amplitude);
    lip_x_ += half * a * kTwoPi * freq_norm(m.freq);
    if (spec.kind == EnvironmentKind::Periodic) {
      lip_t_ += half * a * kTwoPi * std::abs(m.time_freq);
    } else {
      lip_t_ += half * a * 2.0;
    }
  }
  if (spec.drift) {
    drift_bound_ = spec.drift->constant.norm();
    for (const auto& m : spec.drift->modes) {
      const double amp = m.amplitude.norm();
      drift_bound_ += amp;
      const double slope_t = spec.kind == EnvironmentKind::Periodic ? kTwoPi * std::abs(m.time_freq) : 2.0;
      lip_b_ += amp * (kTwoPi * freq_norm(m.freq) + slope_t);
    }
  }
  spec_ = std::make_shared<const EnvironmentSpec>(std::move(spec));
}

void Environment::time_split(double t, long& tick, double& frac) const {
  const double tau = reversed_ ? t_end_ - t : t;
  const double base = std::floor(tau);
  tick = static_cast<long>(base) + k0_;
  frac = tau - base;
}

double Environment::temporal(int stream, int time_freq, double time_phase, long tick, double frac) const {
  if (spec_->kind == EnvironmentKind::Periodic) {
    if (time_freq == 0 && time_phase == 0.0) return 1.0;
    return std::cos(kTwoPi * time_freq * frac + time_phase);
  }
  const double c0 = random_coefficient(spec_->seed, stream, tick);
  const double c1 = random_coefficient(spec_->seed, stream, tick + 1);
  return (1.0 - frac) * c0 + frac * c1;
}

double Environment::speed(const Vec& x, double t) const {
  const auto& s = *spec_;
  if (s.modes.empty()) return s.alpha + 0.5 * (s.beta - s.alpha);
  const Vec xhat = frac_part(x, s.dimension);
  long tick = 0;
  double frac = 0.0;
  time_split(t, tick, frac);
  double m = 0.0;
  for (std::size_t j = 0; j < s.modes.size(); ++j) {
    const auto& mode = s.modes[j];
    m += mode.amplitude * std::sin(spatial_arg(mode.freq, xhat, s.dimension, mode.phase)) *
         temporal(static_cast<int>(j), mode.time_freq, mode.time_phase, tick, frac);
  }
  return s.alpha + 0.5 * (s.beta - s.alpha) * (1.0 + m);
}

Vec Environment::drift(const Vec& x, double t) const {
  const auto& s = *spec_;
  if (!s.drift) return {};
  Vec b = s.drift->constant;
  if (!s.drift->modes.empty()) {
    const Vec xhat = frac_part(x, s.dimension);
    long tick = 0;
    double frac = 0.0;
    time_split(t, tick, frac);
    for (std::size_t j = 0; j < s.drift->modes.size(); ++j) {
      const auto& mode = s.drift->modes[j];
      const double w = std::sin(spatial_arg(mode.freq, xhat, s.dimension, mode.phase)) *
                       temporal(kDriftStreamBase + static_cast<int>(j), mode.time_freq, mode.time_phase, tick, frac);
      b += mode.amplitude * w;
    }
  }
  return reversed_ ? -b : b;
}

Environment Environment::shifted(long k) const {
  Environment e = *this;
  e.k0_ += k;
  return e;
}

Environment Environment::time_reversed(double t_end) const {
  Environment e = *this;
  if (reversed_) {
    // reversing twice: t -> t_end_ - (t_end - t)
    e.reversed_ = false;
    e.t_end_ = 0.0;
    e.k0_ = k0_;
    require(t_end_ - t_end == std::floor(t_end_ - t_end), ErrorKind::InvalidArgument,
            "double reversal requires an integer net offset");
    e.k0_ += static_cast<long>(t_end_ - t_end);
    return e;
  }
  e.reversed_ = true;
  e.t_end_ = t_end;
  return e;
}

bool Environment::is_autonomous() const {
  const auto& s = *spec_;
  if (s.kind == EnvironmentKind::RandomTime) return s.modes.empty() && (!s.drift || s.drift->modes.empty());
  for (const auto& m : s.modes) {
    if (m.time_freq != 0) return false;
  }
  if (s.drift) {
    for (const auto& m : s.drift->modes) {
      if (m.time_freq != 0) return false;
    }
  }
  return true;
}

std::uint64_t Environment::fingerprint() const {
  std::string key = to_config_text(*spec_);
  key += "\nk0=" + std::to_string(k0_);
  if (reversed_) key += "\nreversed=" + format_double(t_end_);
  return fnv1a64(key);
}

Environment build_environment(const EnvironmentSpec& spec) { return Environment(spec); }

double eval_velocity(const Environment& env, const Vec& x, double t) { return env.speed(x, t); }

Environment shift_time(const Environment& env, long k) { return env.shifted(k); }

std::string kind_name(EnvironmentKind k) { return k == EnvironmentKind::Periodic ? "periodic" : "random-time"; }

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::array<int, kMaxDim> parse_freq(const std::string& text, int dim, const std::string& what) {
  auto vals = parse_doubles(text, what);
  if (static_cast<int>(vals.size()) != dim) {
    fail(ErrorKind::InvalidConfig, what + ": frequency needs " + std::to_string(dim) + " integers");
  }
  std::array<int, kMaxDim> f{0, 0, 0};
  for (int i = 0; i < dim; ++i) {
    const double v = vals[static_cast<std::size_t>(i)];
    if (v != std::round(v)) fail(ErrorKind::InvalidConfig, what + ": frequency must be integer");
    f[static_cast<std::size_t>(i)] = static_cast<int>(v);
  }
  return f;
}

Vec parse_vec(const std::string& text, int dim, const std::string& what) {
  auto vals = parse_doubles(text, what);
  if (static_cast<int>(vals.size()) != dim) {
    fail(ErrorKind::InvalidConfig, what + ": vector needs " + std::to_string(dim) + " components");
  }
  Vec v;
  for (int i = 0; i < dim; ++i) v[i] = vals[static_cast<std::size_t>(i)];
  return v;
}

std::string freq_text(const std::array<int, kMaxDim>& f, int dim) {
  std::string s;
  for (int i = 0; i < dim; ++i) {
    if (i) s += ' ';
    s += std::to_string(f[static_cast<std::size_t>(i)]);
  }
  return s;
}

std::string vec_text(const Vec& v, int dim) {
  std::string s;
  for (int i = 0; i < dim; ++i) {
    if (i) s += ' ';
    s += format_double(v[i]);
  }
  return s;
}

}  // namespace

EnvironmentSpec parse_environment(const ConfigFile& cfg) {
  cfg.check_keys("environment", {"dimension", "kind", "alpha", "beta", "seed", "mode"});
  cfg.check_keys("drift", {"eta", "constant", "mode"});
  EnvironmentSpec s;
  s.dimension = static_cast<int>(cfg.get_long("environment", "dimension", 1));
  if (s.dimension < 1 || s.dimension > kMaxDim) fail(ErrorKind::InvalidConfig, "environment.dimension out of range");
  const std::string kind = cfg.get("environment", "kind").value_or("periodic");
  if (kind == "periodic") {
    s.kind = EnvironmentKind::Periodic;
  } else if (kind == "random-time") {
    s.kind = EnvironmentKind::RandomTime;
  } else {
    fail(ErrorKind::InvalidConfig, "environment.kind must be periodic or random-time");
  }
  s.alpha = parse_double(cfg.require("environment", "alpha"), "environment.alpha");
  s.beta = parse_double(cfg.require("environment", "beta"), "environment.beta");
  if (auto seed = cfg.get("environment", "seed")) s.seed = parse_u64(*seed, "environment.seed");
  for (const auto& line : cfg.get_all("environment", "mode")) {
    auto f = split(line, '|');
    if (f.size() < 2 || f.size() > 5) fail(ErrorKind::InvalidConfig, "environment.mode: expected 2-5 '|' fields");
    SpeedMode m;
    m.freq = parse_freq(f[0], s.dimension, "environment.mode");
    m.amplitude = parse_double(f[1], "environment.mode amplitude");
    if (f.size() > 2) m.phase = parse_double(f[2], "environment.mode phase");
    if (f.size() > 3) m.time_freq = static_cast<int>(parse_long(f[3], "environment.mode time_freq"));
    if (f.size() > 4) m.time_phase = parse_double(f[4], "environment.mode time_phase");
    s.modes.push_back(m);
  }
  if (cfg.has_section("drift")) {
    DriftSpec d;
    d.eta = parse_double(cfg.require("drift", "eta"), "drift.eta");
    if (auto c = cfg.get("drift", "constant")) d.constant = parse_vec(*c, s.dimension, "drift.constant");
    for (const auto& line : cfg.get_all("drift", "mode")) {
      auto f = split(line, '|');
      if (f.size() < 2 || f.size() > 5) fail(ErrorKind::InvalidConfig, "drift.mode: expected 2-5 '|' fields");
      DriftMode m;
      m.freq = parse_freq(f[0], s.dimension, "drift.mode");
      m.amplitude = parse_vec(f[1], s.dimension, "drift.mode amplitude");
      if (f.size() > 2) m.phase = parse_double(f[2], "drift.mode phase");
      if (f.size() > 3) m.time_freq = static_cast<int>(parse_long(f[3], "drift.mode time_freq"));
      if (f.size() > 4) m.time_phase = parse_double(f[4], "drift.mode time_phase");
      d.modes.push_back(m);
    }
    s.drift = d;
  }
  return s;
}

void write_environment(const EnvironmentSpec& s, ConfigFile& out) {
  out.add("environment", "dimension", std::to_string(s.dimension));
  out.add("environment", "kind", kind_name(s.kind));
  out.add("environment", "alpha", format_double(s.alpha));
  out.add("environment", "beta", format_double(s.beta));
  out.add("environment", "seed", std::to_string(s.seed));
  for (const auto& m : s.modes) {
    out.add("environment", "mode",
            freq_text(m.freq, s.dimension) + " | " + format_double(m.amplitude) + " | " + format_double(m.phase) +
                " | " + std::to_string(m.time_freq) + " | " + format_double(m.time_phase));
  }
  if (s.drift) {
    out.add("drift", "eta", format_double(s.drift->eta));
    out.add("drift", "constant", vec_text(s.drift->constant, s.dimension));
    for (const auto& m : s.drift->modes) {
      out.add("drift", "mode",
              freq_text(m.freq, s.dimension) + " | " + vec_text(m.amplitude, s.dimension) + " | " +
                  format_double(m.phase) + " | " + std::to_string(m.time_freq) + " | " +
                  format_double(m.time_phase));
    }
  }
}

std::string to_config_text(const EnvironmentSpec& spec) {
  ConfigFile cfg;
  write_environment(spec, cfg);
  return cfg.to_string();
}

}  // namespace frontlab
