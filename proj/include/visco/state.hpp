#pragma once

#include "visco/field.hpp"
#include "visco/params.hpp"

namespace visco {

/// Perturbation U = (φ, w, Ψ) held as spectra; Ψ is row-major, Ψ^{jk} ≈ ∂_k ψ^j.
struct StateU {
  Spectrum phi;
  Spectrum w;
  Spectrum Psi;

  explicit StateU(const SpectralGrid& g)
      : phi(g, Rank::scalar), w(g, Rank::vector), Psi(g, Rank::tensor) {}
  StateU(Spectrum phi_, Spectrum w_, Spectrum Psi_);

  const SpectralGrid& grid() const { return phi.grid(); }

  StateU& operator+=(const StateU& o);
  StateU& operator*=(double s);
  void axpy(double a, const StateU& x);

  /// Copy the 13 coefficients of mode s into out.
  void gather(std::size_t s, Complex* out) const;
  void scatter(std::size_t s, const Complex* in);
};

/// Physical-space view of a state.
struct StateFields {
  Field phi;
  Field w;
  Field Psi;
};

StateFields to_physical(const StateU& u);
StateU from_physical(const Field& phi, const Field& w, const Field& Psi);

/// Largest coefficient magnitude of φ + tr Ψ (physical maximum).
double constraint_defect(const StateU& u);

/// ‖U‖_{L^p} with the pointwise Euclidean norm over all 13 components.
double state_lp_norm(const StateU& u, double p);

/// e^{−tL} U0 evaluated mode by mode from the closed-form kernel.
/// Factors are cached per lattice shell |m|²; the zero mode is left unchanged and
/// Nyquist modes are set to zero.
StateU semigroup_apply(const ModelParams& p, const StateU& u0, double t);

}  // namespace visco
