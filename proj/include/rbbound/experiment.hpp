#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rbbound/benchmarks.hpp"
#include "rbbound/error_bounds.hpp"

namespace rb {

/// Experiment configuration: a flat key=value file plus command-line
/// overrides. Unknown keys are rejected.
struct ExperimentConfig {
  std::string benchmark = "transport";  // transport | diffusion

  // benchmark parameters
  double dx = 0.05;
  double dt = 0.02;
  int blocks = 3;
  int grid_n = 60;

  std::vector<int> basis_sizes = {2, 4, 6, 8, 10, 12, 14};
  int pod_snapshots = 80;
  int bound_snapshots = 200;
  std::optional<int> N;  // truncation; defaults 10 transport, 20 diffusion
  int partition_per_dim = 1;
  double alpha = 1e-4;  // bound risk
  int eval_sample = 200;
  bool corrected = false;  // for the train subcommand
  bool t2_halved = false;

  std::uint64_t seed_snapshot = 1;
  std::uint64_t seed_train = 2;
  std::uint64_t seed_eval = 3;

  // Sobol sub-config
  int sobol_M = 1000;
  int sobol_B = 500;
  double sobol_alpha = 1e-5;
  double sobol_alpha_as = 0.05;
  int sobol_basis = 5;  // must stay below the diffusion snapshot rank ~ 2b-1
  bool sobol_eps_zero = false;  // debug: inject eps == 0

  int effective_N() const;
  AffineModel build_model() const;

  /// Serialized key=value view (also embedded in CSV headers).
  std::map<std::string, std::string> to_map() const;
};

/// Parse a flat key=value config file. Lines starting with '#' and blank
/// lines are skipped. Throws ConfigError on unknown keys or bad values.
ExperimentConfig parse_config_file(const std::string& path);

/// Apply one "key=value" override.
void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);

/// Convergence sweep: one CSV row per basis size with mean true errors and
/// the four mean bounds over a fresh evaluation sample. Deterministic under
/// fixed seeds.
void run_convergence(const ExperimentConfig& cfg, std::ostream& out);

/// Certified Sobol table: one CSV row per input parameter.
void run_sobol(const ExperimentConfig& cfg, std::ostream& out);

/// Offline artifact: reduced model (projected matrices and bases) plus the
/// trained goal-oriented bound data, reusable across CLI runs. Coefficient
/// callbacks are rebound from the benchmark named in the embedded config.
struct Artifact {
  ExperimentConfig config;
  int basis_size = 0;
  ReducedModel rm;
  GoalOrientedBoundData data;
};

Artifact train_artifact(const ExperimentConfig& cfg);
void save_artifact(const std::string& path, const Artifact& artifact);
Artifact load_artifact(const std::string& path);

}  // namespace rb
