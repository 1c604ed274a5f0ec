#pragma once

#include <cstdint>
#include <string>

#include "visco/kinematics.hpp"

namespace visco {

enum class DataMode { rank_one_shear, radial_potential, random_smooth };

DataMode parse_data_mode(const std::string& s);
std::string to_string(DataMode m);

/// Initial-data recipe. Profiles are Gaussians of width σ = radius/5 centred in
/// the box, so the data is negligible (relative 4e-6) outside the support radius.
struct DataSpec {
  DataMode mode = DataMode::rank_one_shear;
  double amplitude = 1e-2;   // max |∇ψ̃₀|
  double radius = 6.0;       // support radius R₀
  double velocity = 0.0;     // max |v₀| relative to amplitude (0 disables)
  std::uint64_t seed = 1;
};

struct InitialData {
  Spectrum psi_tilde;  // ψ̃₀
  Field v;             // v₀
};

/// Builds ψ̃₀ and v₀, filtered to the two-thirds band without Nyquist content.
///   rank_one_shear:   ψ̃₀ = e₂ g(x₁), v₀ = velocity·amplitude·e₂ g′-profile
///   radial_potential: ψ̃₀ = ∇η, v₀ = ∇χ with Gaussian η, χ
///   random_smooth:    Gaussian envelope times random low-order trigonometric modes
InitialData make_initial_data(const SpectralGrid& g, const DataSpec& spec);

/// primitive_from_displacement of the generated data.
PrimitiveState make_primitive(const SpectralGrid& g, const DataSpec& spec);

/// Smooth random U on the linear constraint manifold: Ψ = ∇ψ, φ = −div ψ, with
/// spectra decaying like exp(−decay |m|²) in lattice units and max |U| = amplitude.
StateU random_linear_state(const SpectralGrid& g, double amplitude, std::uint64_t seed, double decay = 0.5);

/// Largest physical support radius the generator may use on this box.
double support_radius_limit(const SpectralGrid& g);

}  // namespace visco
