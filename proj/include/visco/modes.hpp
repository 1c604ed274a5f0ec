#pragma once

#include <array>
#include <complex>

#include "visco/params.hpp"

namespace visco {

/// Roots μ₁..μ₄ of μ² + νk²μ + β²k² = 0 and μ² + (ν+ν̃)k²μ + (β²+γ²)k² = 0.
/// μ₁, μ₃ carry the + branch of the square root (√(−x) = +i√x).
struct ModeEigen {
  double k = 0.0;
  std::array<std::complex<double>, 4> mu{};
  bool confluent_shear = false;
  bool confluent_comp = false;
};

/// Time factors of the closed-form kernel at fixed (k, t).
/// s⁻ = (e^{μ₁t} − e^{μ₂t})/(μ₁−μ₂), s⁺ = (μ₁e^{μ₁t} − μ₂e^{μ₂t})/(μ₁−μ₂),
/// s⁰ = (μ₁e^{μ₂t} − μ₂e^{μ₁t})/(μ₁−μ₂); c-factors likewise with μ₃, μ₄.
struct KernelFactors {
  std::complex<double> s_minus, s_plus, s_zero;
  std::complex<double> c_minus, c_plus, c_zero;
};

/// Relative discriminant threshold for flagging coincident roots.
inline constexpr double kConfluenceTol = 1e-10;

ModeEigen eigenvalues(const ModelParams& p, double k);

/// Factors of one damped branch x'' + a k² x' + b k² x = 0:
/// {x with x(0)=0, x'(0)=1;  its derivative;  x with x(0)=1, x'(0)=0}.
std::array<double, 3> branch_factors(double a, double b, double k, double t);

KernelFactors kernel_factors(const ModelParams& p, double k, double t);

/// Test-only mutation hook: when nonzero, the sign of s⁻ is flipped. Used to
/// check that the verification suite detects a wrong kernel.
void set_kernel_mutation(bool flip_s_minus);
bool kernel_mutation();

}  // namespace visco
