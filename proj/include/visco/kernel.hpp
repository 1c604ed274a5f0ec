#pragma once

#include <Eigen/Dense>

#include <array>

#include "visco/grid.hpp"
#include "visco/modes.hpp"

namespace visco {

/// Unknowns of one Fourier mode: φ̂ (0), ŵ (1..3), Ψ̂ row-major (4..12).
inline constexpr int kStateDim = 13;
using Mode13 = Eigen::Matrix<Complex, kStateDim, 1>;
using Matrix13 = Eigen::Matrix<Complex, kStateDim, kStateDim>;
using Matrix6 = Eigen::Matrix<Complex, 6, 6>;

/// M(ξ) with ∂_t Û = M(ξ) Û for the linearized system.
Matrix13 generator_matrix(const ModelParams& p, const Vec3& xi);

/// Closed-form kernel applied to one mode using precomputed factors.
/// Valid on the constraint manifold φ̂ = −iξ·ψ̂, Ψ̂ = iψ̂ξᵀ.
void apply_kernel(const KernelFactors& f, const ModelParams& p, const Vec3& xi,
                  const Complex* in, Complex* out);

/// K̂(ξ, t) û; ξ = 0 returns û.
Mode13 kernel_apply_point(const ModelParams& p, const Vec3& xi, double t, const Mode13& u);

/// 13 x 6 map (ψ̂, ŵ) -> Û onto the constraint manifold.
Eigen::Matrix<Complex, kStateDim, 6> manifold_basis(const Vec3& xi);

/// The 6 x 6 block matrix 𝒜(ξ) acting on (ψ̂, ŵ): ∂_t(ψ̂, ŵ) = −𝒜(ξ)(ψ̂, ŵ).
Matrix6 damped_wave_matrix(const ModelParams& p, const Vec3& xi);

/// Eigenprojections Π₁..Π₄ of −𝒜(ξ) for μ₁..μ₄.
/// Throws std::domain_error at confluent shells or ξ = 0.
std::array<Matrix6, 4> eigenprojections(const ModelParams& p, const Vec3& xi);

}  // namespace visco
