#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "visco/data.hpp"
#include "visco/decay.hpp"
#include "visco/energy.hpp"
#include "visco/radial.hpp"
#include "visco/simulation.hpp"

namespace visco {

enum class ExperimentMode { linear_grid, linear_radial, nonlinear };
ExperimentMode parse_experiment_mode(const std::string& s);
std::string to_string(ExperimentMode m);

/// Everything a decay run needs. Loaded from key=value text (one pair per line,
/// '#' comments) or from a JSON object with the same keys.
struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::linear_grid;
  ModelParams params;
  int n = 32;
  double length = 32.0;
  bool dealias = true;
  DataSpec data;
  RadialData radial;
  double t_start = 0.5;  // first positive sample
  double t_end = 5.0;
  int samples = 16;
  bool log_schedule = true;
  std::vector<double> norms{2.0, 4.0, std::numeric_limits<double>::infinity()};
  std::optional<double> fit_t0;  // default: trailing half of the valid window
  std::optional<double> fit_t1;
  double dt = 0.0;
  bool split = true;
  bool energy = false;
  bool compare_beta_zero = false;
  bool snapshots = false;
  int threads = 1;

  /// Applies one key=value setting. Throws std::invalid_argument for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// Sample times: 0 followed by `samples` points on [t_start, t_end].
  std::vector<double> schedule() const;
  /// Canonical key=value text; the config hash is FNV-1a of this.
  std::string canonical() const;
  std::uint64_t hash() const;
  /// Resolution, box and horizon checks; returns warnings, throws on hard errors.
  std::vector<std::string> validate() const;
};

struct ResidualSummary {
  double div_rhoF = 0.0;
  double det = 0.0;
  double curl = 0.0;
  double phi_trace = 0.0;
  double n1_trace_n3 = 0.0;
};

struct ExperimentResult {
  DecaySeries series;  // total norms
  DecaySeries low;     // ‖U₁‖ per p (grid runs with split)
  DecaySeries high;    // ‖U∞‖ per p
  std::optional<FitResult> high_exponential;  // log‖U∞‖_{L²} against t
  /// β = 0 comparison: L∞ of the solenoidal velocity (mean removed).
  std::optional<DecaySeries> solenoidal;
  std::optional<DecaySeries> solenoidal_beta_zero;
  /// Radial runs: heat-flow reference on the same data.
  std::optional<DecaySeries> heat_reference;
  std::vector<EnergySample> energy;
  ResidualSummary residuals;
  FitWindow window;
  double horizon = std::numeric_limits<double>::infinity();
  bool truncated = false;
  double gamma_ratio = 0.0;
  int steps = 0;
  std::vector<std::string> warnings;
};

/// Runs one experiment as configured. Snapshots, when enabled, go to snapshot_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& snapshot_dir = {});

}  // namespace visco
