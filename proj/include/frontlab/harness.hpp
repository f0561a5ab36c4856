#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frontlab/config.hpp"
#include "frontlab/environment.hpp"
#include "frontlab/error.hpp"
#include "frontlab/report.hpp"

namespace frontlab {

enum class ExperimentKind { Reach, Average, Rotation, Homogenize, Drift, Noncoercive };

std::optional<ExperimentKind> experiment_from_name(std::string_view name);
std::string experiment_name(ExperimentKind k);

/// Validated knobs of one experiment. Keys live in the [experiment] section;
/// see docs/schema.md for the per-experiment key sets and defaults.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Reach;
  EnvironmentSpec env;

  double h = 1.0 / 64;
  double dt = 0.0;

  // reach
  bool from_cell = false;
  Vec start;
  double s = 0.0;
  double t = 1.0;

  // average / drift
  std::vector<long> schedule{25, 50, 100};
  std::vector<double> uniform_times;
  int samples_per_axis = 3;
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<long, long>> subadditivity;

  // rotation
  double x = 0.0;
  double horizon = 100.0;
  double step = 1e-3;

  // homogenize / noncoercive
  std::vector<double> eps_list{0.25, 0.125, 0.0625};
  double control_h = 1.0 / 512;
  double reach_h = 1.0 / 512;
  double T = 1.0;
  Vec lo;
  Vec hi;
  double sample_h = 0.125;
  std::vector<double> times{0.25, 0.5, 0.75, 1.0};
  double cap = 2.0;
  int points = 20;
  std::uint64_t point_seed = 1;
  double amp = 0.5;

  /// Canonical text of every semantic field; the config hash is taken over it.
  std::string canonical;
};

/// Parses and validates; throws invalid-config / invalid-spec before any compute.
ExperimentConfig load_experiment(const ConfigFile& cfg, std::optional<std::uint64_t> seed_override = std::nullopt);

/// 16 hex digits of fnv1a over the canonical text.
std::string config_hash(const ExperimentConfig& cfg);

struct RunOutput {
  Json report;
  std::vector<std::string> files;  // written paths
};

/// Runs the experiment and writes <name>-<hash>.json plus CSV series and set
/// dumps into out_dir (created if missing).
RunOutput run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

/// Exit codes: 0 ok, 2 config, 3 numeric, 4 io.
int exit_code_for(ErrorKind kind);

/// CLI entry: validates the subcommand against the config's experiment name,
/// runs, and maps failures to exit codes with a one-line message on `err`.
int run_command(const std::string& subcommand, const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed, std::ostream& err);

}  // namespace frontlab
