#pragma once

#include <limits>
#include <vector>

#include "visco/decay.hpp"
#include "visco/params.hpp"

namespace visco {

/// Gauss–Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
GaussRule gauss_legendre(int order);

/// j₀(x), j₁(x)/x and j₀(x) − 2j₁(x)/x, accurate down to x = 0.
struct SphericalBessel {
  double j0;
  double j1_over_x;
  double j1_prime;  // j₁′(x) = j₀(x) − 2 j₁(x)/x
};
SphericalBessel spherical_bessel(double x);

/// Radially symmetric gradient data in ℝ³.
/// φ₀ is a Gaussian of mass M and width σ (so η = (−Δ)^{-1}φ₀ has a Coulomb tail)
/// and the velocity potential χ₀ is a Gaussian with transform V σ² e^{−σ²k²/2}.
struct RadialData {
  double mass = 1.0;
  double velocity = 0.0;
  double sigma = 1.0;
};

struct RadialOptions {
  ModelParams params;
  RadialData data;
  std::vector<double> times;
  std::vector<double> norms{2.0, 4.0, std::numeric_limits<double>::infinity()};
  /// Replace the kernel by the heat flow e^{−νk²t} acting on φ alone.
  bool heat_reference = false;
  int order = 16;            // Gauss–Legendre points per panel
  double k_tol = 1e-18;      // relative envelope below which the k-integrand is dropped
  double check_tol = 1e-9;   // accepted relative change under panel refinement
};

/// Radial profiles at one time: φ, |w| = |χ′|, η″ and η′/r, sampled at r.
struct RadialProfiles {
  std::vector<double> r;
  std::vector<double> phi;
  std::vector<double> dchi;
  std::vector<double> eta_rr;
  std::vector<double> eta_r_over_r;
};

/// Spectral profiles (φ̂, χ̂)(k, t) evolved by the compressible factors.
struct RadialSpectrum {
  double phi_hat;
  double chi_hat;
};
RadialSpectrum radial_spectrum(const RadialOptions& opt, double k, double t);

/// Physical profiles at the given radii by spherical-Bessel quadrature.
RadialProfiles radial_profiles(const RadialOptions& opt, double t, const std::vector<double>& r);

/// ‖u(t)‖_{L^p} for the full perturbation (φ, ∇χ, ∇∇η) with pointwise Euclidean norm.
/// p = infinity returns the maximum over r.
double radial_lp_norm(const RadialOptions& opt, double t, double p);

/// ‖u(t)‖_{L²} from the k-space integrand alone.
double radial_plancherel_l2(const RadialOptions& opt, double t);

/// Series of the requested norms at opt.times. Throws QuadratureError when a
/// refinement check of the oscillatory integrals fails.
DecaySeries run_linear_radial(const RadialOptions& opt);

}  // namespace visco
