#pragma once

#include <optional>

#include "visco/params.hpp"
#include "visco/spectral.hpp"
#include "visco/state.hpp"

namespace visco {

/// High-frequency energy E and dissipation D of Ũ∞ = P∞(φ, w, ∇ψ̃):
///   E = ‖Ũ∞‖²_{H²} + c₁ Σ_{|α|≤2} (∂ᵅw∞, ∂ᵅψ̃∞)
///   D = Σ_{|α|≤2} ν‖∇∂ᵅw∞‖² + ν̃‖div ∂ᵅw∞‖² + c₁γ²‖∂ᵅφ∞‖² + c₁β²‖∂ᵅΨ̃∞‖²
struct EnergyReport {
  double E = 0.0;
  double D = 0.0;
  double c1 = 0.0;
  double time = 0.0;
  double h2_sq = 0.0;  // ‖Ũ∞‖²_{H²}
};

/// 0.9 min{1/(2(ν/β² + ν̃/γ² + 2/ν)), β²m₁²/8, m₁/2}.
double default_c1(const ModelParams& p, double m1);

struct C1Policy {
  std::optional<double> value;  // overrides default_c1 when set
  double resolve(const ModelParams& p, double m1) const;
};

/// A is ∇ψ̃ (tensor spectrum); the split uses the cutoff at p.m1().
EnergyReport hf_energy(const ModelParams& p, const StateU& u, const Spectrum& A, const C1Policy& policy = {},
                       double time = 0.0);

/// Linear-regime shorthand with ψ̃ identified with ψ (A = Ψ).
EnergyReport hf_energy(const ModelParams& p, const StateU& u, const C1Policy& policy = {}, double time = 0.0);

}  // namespace visco
