#pragma once

#include <optional>

#include "visco/kinematics.hpp"
#include "visco/params.hpp"
#include "visco/state.hpp"

namespace visco {

/// Kinematic quantities needed by the nonlinearity: ∇ψ̃ and X(φ, ∇ψ̃) from the Γ solve.
struct Kinematics {
  Spectrum A;
  Spectrum X;
  int gamma_iterations = 0;
  double gamma_ratio = 0.0;
};

Kinematics solve_kinematics(const StateU& u, const GammaOptions& opt = {}, const Spectrum* warm_start = nullptr);

/// N(U) = (N₁, N₂, N₃) of the reformulated system. Products are formed in
/// physical space; with dealiasing the result is truncated to the two-thirds band.
/// Throws IntegrityError when |φ| >= 1/2 or |∇ψ̃| >= 1 somewhere.
StateU nonlinear_terms(const ModelParams& p, const StateU& u, const Kinematics& aux);

/// Largest |N₁ + tr N₃| in physical space.
double n1_trace_n3_defect(const StateU& n);

/// 0.5 / (√(β²+γ²) k_max) with k_max = (2π/L)(n/2).
double dt_max(const ModelParams& p, const SpectralGrid& g);

struct StepOptions {
  bool nonlinear = true;
  GammaOptions gamma{};
  bool enforce_dt_max = true;
};

/// Second-order exponential integrator with the exact kernel for the linear part:
///   a = e^{−dtL}U,  b = e^{−dtL}N(U),  Ũ = a + dt b,  U⁺ = a + dt/2 (b + N(Ũ)).
/// Keeps the last ∇ψ̃ as a warm start for the next Γ solve.
class EtdStepper {
 public:
  EtdStepper(ModelParams p, StepOptions opt = {});

  StateU step(const StateU& u, double dt);

  /// N evaluated at the start of the last step (for diagnostics).
  const std::optional<StateU>& last_nonlinearity() const { return last_n_; }
  const std::optional<Kinematics>& last_kinematics() const { return last_kin_; }

 private:
  StateU evaluate(const StateU& u, bool keep);

  ModelParams p_;
  StepOptions opt_;
  std::optional<Spectrum> warm_;
  std::optional<StateU> last_n_;
  std::optional<Kinematics> last_kin_;
};

/// One step without warm start.
StateU etd_step(const ModelParams& p, const StateU& u, double dt, const StepOptions& opt = {});

}  // namespace visco
