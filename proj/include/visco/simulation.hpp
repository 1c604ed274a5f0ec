#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "visco/energy.hpp"
#include "visco/kinematics.hpp"
#include "visco/nonlinear.hpp"

namespace visco {

enum class NormPart { total, low, high };

struct NormSample {
  double time;
  double p;  // infinity for the sup norm
  NormPart part;
  double value;
};

struct ResidualSample {
  double time;
  ConstraintReport report;
  double n1_trace_n3 = 0.0;  // nonlinear runs only
  double phi_trace = 0.0;    // max |φ + tr Ψ|
};

struct EnergySample {
  EnergyReport report;
  double balance = std::numeric_limits<double>::quiet_NaN();  // dE/dt + D by central differences
};

struct SimulationOptions {
  ModelParams params;
  double t_end = 1.0;
  std::vector<double> output_times;  // sorted, within [0, t_end]; empty means {0, t_end}
  double dt = 0.0;                   // 0 selects 0.9 dt_max
  bool nonlinear = true;
  std::vector<double> norms{2.0, 4.0, std::numeric_limits<double>::infinity()};
  bool split_norms = false;
  bool residuals = true;
  bool energy = false;
  C1Policy c1{};
  double support_radius = 0.0;  // R₀ of the data; sets the wrap-around horizon
  GammaOptions gamma{};
  std::function<void(double, const StateU&)> on_snapshot;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<NormSample> norms;
  std::vector<ResidualSample> residuals;
  std::vector<EnergySample> energy;
  StateU final_state;
  double horizon = std::numeric_limits<double>::infinity();
  bool truncated = false;
  int steps = 0;
  double max_gamma_ratio = 0.0;

  explicit Trajectory(const SpectralGrid& g) : final_state(g) {}
  /// Series of one norm at the stored times.
  std::vector<double> series(double p, NormPart part = NormPart::total) const;
};

/// (L/2 − R₀)/√(β²+γ²): time until the fastest front from the support wraps around.
double wraparound_horizon(const ModelParams& p, const SpectralGrid& g, double support_radius);

/// Evolves U from the given primitive state. Linear runs apply the exact kernel
/// to the initial data at every output time; nonlinear runs step with EtdStepper.
Trajectory run_simulation(const PrimitiveState& initial, const SimulationOptions& opt);
Trajectory run_simulation(const StateU& initial, const SimulationOptions& opt);

}  // namespace visco
