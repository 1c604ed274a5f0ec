#pragma once

#include <string>

namespace visco {

/// Physical coefficients of the linearized system around (ρ, v, F) = (1, 0, I).
struct ModelParams {
  double nu = 1.0;        // shear viscosity ν
  double nu_prime = 0.0;  // second viscosity ν′
  double beta = 1.0;      // elasticity strength β
  double gamma = 1.0;     // sound parameter γ = √P′(1)
  double kappa = 0.0;     // P″(1) of the quadratic pressure law

  double nu_tilde() const { return nu + nu_prime; }
  /// Split scale min{β/ν, √(β²+γ²)/(ν+ν̃)}.
  double m1() const;
  /// Fastest wave speed √(β²+γ²).
  double wave_speed() const;

  /// Throws std::invalid_argument unless ν>0, 2ν+3ν′>=0, β>0, γ>0.
  /// With allow_zero_beta the elastic coupling may vanish (heat-type comparison runs).
  void validate(bool allow_zero_beta = false) const;

  std::string describe() const;
};

/// Quadratic pressure law P(ρ) = γ²(ρ−1) + ½κ(ρ−1)².
struct PressureModel {
  double gamma = 1.0;
  double kappa = 0.0;

  explicit PressureModel(const ModelParams& p) : gamma(p.gamma), kappa(p.kappa) {}
  PressureModel(double g, double k) : gamma(g), kappa(k) {}

  double P(double rho) const { return gamma * gamma * (rho - 1.0) + 0.5 * kappa * (rho - 1.0) * (rho - 1.0); }
  double dP(double rho) const { return gamma * gamma + kappa * (rho - 1.0); }
  double d2P(double /*rho*/) const { return kappa; }
  /// Q(φ) = φ² ∫₀¹ P″(1+sφ) ds.
  double Q(double phi) const { return phi * phi * kappa; }
};

}  // namespace visco
