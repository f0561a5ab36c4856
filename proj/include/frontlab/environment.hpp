#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/config.hpp"
#include "frontlab/vec.hpp"

namespace frontlab {

/// How the speed modulation depends on time.
///  - Periodic:   each mode carries a closed-form factor cos(2*pi*nu*t + psi), period 1.
///  - RandomTime: each mode carries an i.i.d. uniform[-1,1] coefficient per integer
///                time, linearly interpolated in between. The stream is keyed by
///                (seed, mode, integer time), so integer time shifts are index shifts.
enum class EnvironmentKind { Periodic, RandomTime };

struct SpeedMode {
  std::array<int, kMaxDim> freq{0, 0, 0};  // spatial frequency in Z^n
  double amplitude = 0.0;
  double phase = 0.0;       // spatial phase, radians
  int time_freq = 0;        // periodic kind only
  double time_phase = 0.0;  // periodic kind only
};

struct DriftMode {
  std::array<int, kMaxDim> freq{0, 0, 0};
  Vec amplitude;
  double phase = 0.0;
  int time_freq = 0;
  double time_phase = 0.0;
};

/// b(x,t) = constant + sum_j amplitude_j * sin(2*pi*k_j.x + phase_j) * c_j(t),
/// with c_j(t) following the environment's kind.
struct DriftSpec {
  Vec constant;
  std::vector<DriftMode> modes;
  double eta = 0.0;  // required margin alpha - sup|b| >= eta
};

struct EnvironmentSpec {
  int dimension = 1;
  EnvironmentKind kind = EnvironmentKind::Periodic;
  double alpha = 1.0;
  double beta = 1.0;
  std::vector<SpeedMode> modes;
  std::optional<DriftSpec> drift;
  std::uint64_t seed = 0;
};

inline constexpr int kMaxModes = 8;

/// Speed field a(x,t) = alpha + (beta-alpha)(1+m(x,t))/2 with |m| <= 1, plus an
/// optional drift b(x,t). Immutable; copies share the spec.
///
/// The integer time offset k0 realizes the shift group: evaluating the shifted
/// environment at t is evaluating the original at t + k0. A time-reversed view
/// (used for backward reachable sets) evaluates a(x, t_end - t) and -b(x, t_end - t).
class Environment {
 public:
  explicit Environment(EnvironmentSpec spec);

  [[nodiscard]] double speed(const Vec& x, double t) const;
  [[nodiscard]] Vec drift(const Vec& x, double t) const;

  [[nodiscard]] Environment shifted(long k) const;
  [[nodiscard]] Environment time_reversed(double t_end) const;

  [[nodiscard]] const EnvironmentSpec& spec() const { return *spec_; }
  [[nodiscard]] int dim() const { return spec_->dimension; }
  [[nodiscard]] double alpha() const { return spec_->alpha; }
  [[nodiscard]] double beta() const { return spec_->beta; }
  [[nodiscard]] bool has_drift() const { return spec_->drift.has_value(); }
  /// Upper bound on sup|b| (0 without drift).
  [[nodiscard]] double drift_bound() const { return drift_bound_; }
  /// Guaranteed lower bound on the speed of progress in every direction:
  /// alpha without drift, alpha - sup|b| with drift.
  [[nodiscard]] double min_progress() const { return alpha() - drift_bound_; }
  /// Upper bound on |gamma'| for admissible paths: beta + sup|b|.
  [[nodiscard]] double max_progress() const { return beta() + drift_bound_; }

  [[nodiscard]] long time_offset() const { return k0_; }
  [[nodiscard]] bool reversed() const { return reversed_; }

  /// Analytic Lipschitz constants of a in x (Euclidean) and in t.
  [[nodiscard]] double lipschitz_x() const { return lip_x_; }
  [[nodiscard]] double lipschitz_t() const { return lip_t_; }
  [[nodiscard]] double lipschitz() const { return lip_x_ + lip_t_; }
  /// Lipschitz bound of b in (x,t) jointly (sum of both partial bounds).
  [[nodiscard]] double drift_lipschitz() const { return lip_b_; }

  /// True when neither a nor b depends on t (structural check).
  [[nodiscard]] bool is_autonomous() const;

  /// Hash of (spec, k0, reversal); stable across runs.
  [[nodiscard]] std::uint64_t fingerprint() const;

 private:
  [[nodiscard]] double temporal(int stream, int time_freq, double time_phase, long tick, double frac) const;
  void time_split(double t, long& tick, double& frac) const;

  std::shared_ptr<const EnvironmentSpec> spec_;
  long k0_ = 0;
  bool reversed_ = false;
  double t_end_ = 0.0;
  double drift_bound_ = 0.0;
  double lip_x_ = 0.0;
  double lip_t_ = 0.0;
  double lip_b_ = 0.0;
};

Environment build_environment(const EnvironmentSpec& spec);
double eval_velocity(const Environment& env, const Vec& x, double t);
Environment shift_time(const Environment& env, long k);

/// Uniform[-1,1] coefficient for (seed, stream, tick) from a counter-based hash.
double random_coefficient(std::uint64_t seed, int stream, long tick);

// Structured-text (de)serialization; see docs/schema.md.
EnvironmentSpec parse_environment(const ConfigFile& cfg);
void write_environment(const EnvironmentSpec& spec, ConfigFile& out);
std::string to_config_text(const EnvironmentSpec& spec);

std::string kind_name(EnvironmentKind k);

}  // namespace frontlab
