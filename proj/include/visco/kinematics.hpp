#pragma once

#include "visco/field.hpp"
#include "visco/state.hpp"

namespace visco {

/// Physical unknowns (ρ, v, F) of the viscoelastic system.
struct PrimitiveState {
  Field rho;
  Field v;
  Field F;
};

/// ∇ψ̃ = I − (I+G)^{-1}, pointwise. Throws NumericalError when I+G is near singular.
Field grad_psitilde_from_G(const Field& G);
/// G = (I − A)^{-1} − I = A + h(A).
Field G_from_grad_psitilde(const Field& A);
/// h(A) = (I − A)^{-1} − I − A, pointwise.
Field h_map(const Field& A);

/// ψ̂̃ = −i Â ξ / |ξ|² for a gradient tensor A = ∇ψ̃ (zero mode set to 0).
Spectrum potential_from_gradient(const Spectrum& A);

/// X(φ, A) = φA + (1+φ) h(A), returned as a spectrum without Nyquist content.
Spectrum gamma_source(const Field& phi, const Field& A);

/// ψ = ψ̃ − (−Δ)^{-1} div ᵀX(φ, ∇ψ̃).
Spectrum psi_from_psitilde(const Spectrum& phi, const Spectrum& psi_tilde);

struct GammaOptions {
  double tol = 1e-13;  // relative H¹ size of the last Picard update
  int max_iter = 60;
};

struct GammaResult {
  Spectrum psi_tilde;  // ψ̃ (vector)
  Spectrum A;          // ∇ψ̃ (tensor)
  Spectrum X;          // X(φ, ∇ψ̃) at the fixed point
  int iterations = 0;
  double ratio = 0.0;     // largest observed contraction ratio
  double residual = 0.0;  // ‖Γ(ψ̃) − ψ̃‖_{H¹} of the last update
};

/// Fixed point of Γ(ψ̃) = ψ + (−Δ)^{-1} div ᵀX(φ, ∇ψ̃) by Picard iteration.
/// Throws DivergedError when the iteration stops contracting or hits max_iter.
GammaResult gamma_solve_psitilde(const Spectrum& phi, const Spectrum& psi, const GammaOptions& opt = {});

/// Same fixed point written for the gradients only: A = Ψ + ∇(−Δ)^{-1} div ᵀX(φ, A).
/// warm_start, when given, seeds the iteration.
GammaResult gamma_solve_gradient(const Spectrum& phi, const Spectrum& Psi, const GammaOptions& opt = {},
                                 const Spectrum* warm_start = nullptr);

/// F₀ = (I − ∇ψ̃₀)^{-1}, ρ₀ = det(I − ∇ψ̃₀), v₀ as given.
PrimitiveState primitive_from_displacement(const Spectrum& psi_tilde0, const Field& v0);

struct ResidualNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

struct ConstraintReport {
  ResidualNorms div_rhoF;      // div(ρ ᵀF)
  ResidualNorms det;           // ρ det F − 1
  ResidualNorms curl;          // Σ_m (F^{ml} ∂_m F^{jk} − F^{mk} ∂_m F^{jl})
  ResidualNorms phi_trace;     // φ + tr Ψ (only for states built from U)
};

ConstraintReport constraint_residuals(const PrimitiveState& s);
/// Reconstructs (ρ, v, F) through Γ and adds the φ + tr Ψ residual.
ConstraintReport constraint_residuals(const StateU& u, const GammaOptions& opt = {});

struct ConversionReport {
  double G_over_gradpsitilde = 0.0;      // ‖G‖₂ / ‖∇ψ̃‖₂
  double gradpsitilde_over_gradpsi = 0.0;  // ‖∇ψ̃‖₂ / ‖∇ψ‖₂
  int gamma_iterations = 0;
  double gamma_ratio = 0.0;
};

/// u = (ρ−1, v, F−I) -> U = (φ, w, ∇ψ).
StateU state_from_primitive(const PrimitiveState& s, ConversionReport* report = nullptr);
/// U -> (ρ, v, F) through the Γ fixed point.
PrimitiveState primitive_from_state(const StateU& u, const GammaOptions& opt = {},
                                    ConversionReport* report = nullptr);

}  // namespace visco
