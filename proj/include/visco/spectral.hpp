#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <utility>

#include "visco/field.hpp"

namespace visco {

/// Fourier symbol: maps a wavevector to an (out x in) complex matrix acting on
/// the component vector of a mode.
using Symbol = std::function<Eigen::MatrixXcd(const Vec3&)>;

/// Multiply every mode by symbol(ξ). The output rank follows the row count of
/// the symbol (1, 3 or 9). On Nyquist planes the symbol is averaged with its
/// value at the mirrored wavevector so real fields stay real.
/// Throws std::domain_error when the symbol is non-finite at a lattice point
/// and no zero-mode override covers it.
Spectrum apply_multiplier(const Spectrum& f, const Symbol& symbol,
                          const std::optional<Eigen::MatrixXcd>& zero_mode = std::nullopt);
Field apply_multiplier(const Field& f, const Symbol& symbol,
                       const std::optional<Eigen::MatrixXcd>& zero_mode = std::nullopt);

struct CutoffSpec {
  double m1 = 1.0;

  /// Low-frequency weight: 1 for |ξ| <= m1/2, 0 for |ξ| >= m1/√2, C^∞ in between.
  double low(double k) const;
  double high(double k) const { return 1.0 - low(k); }
};

/// (P1 f, P∞ f). Requires c.m1 > 4π/L.
std::pair<Spectrum, Spectrum> frequency_split(const Spectrum& f, const CutoffSpec& c);
std::pair<Field, Field> frequency_split(const Field& f, const CutoffSpec& c);

// Elementary differential operators on spectra.
Spectrum gradient(const Spectrum& f);          // scalar -> vector, vector -> tensor (∂_k v^j at 3j+k)
Spectrum divergence(const Spectrum& v);        // vector -> scalar
Spectrum row_divergence(const Spectrum& t);    // tensor -> vector, (div T)^j = Σ_k ∂_k T^{jk}
Spectrum transpose(const Spectrum& t);
Spectrum trace(const Spectrum& t);
Spectrum laplacian(const Spectrum& f);

/// Multiplication by |ξ|^{-2}; the zero mode is set to 0.
Spectrum inverse_laplacian(const Spectrum& f);
Field inverse_laplacian(const Field& f);

/// Helmholtz projection I - ξξᵀ/|ξ|²; the zero mode passes through.
Spectrum leray_project(const Spectrum& w);
Field leray_project(const Field& w);

/// (-Δ)^{-1} div ᵀT: tensor -> vector, symbol i ξ_k T^{kj} / |ξ|²; zero mode 0.
Spectrum invlap_div_transpose(const Spectrum& t);

/// ∇(-Δ)^{-1} div ᵀT: tensor -> tensor, symbol -ξ_k ξ_l T^{kj} / |ξ|² at (j, l); zero mode 0.
Spectrum grad_invlap_div(const Spectrum& t);
Field grad_invlap_div(const Field& t);

/// (Σ |f|^p h³)^{1/p} with |f| the pointwise Euclidean norm over components;
/// p = infinity gives the maximum. Throws std::invalid_argument for p <= 1.
double lp_norm(const Field& f, double p);

/// H^m norm with weight Σ_{|α|<=m} |ξ^α|² under Plancherel.
double sobolev_norm(const Spectrum& f, int m);
double sobolev_norm(const Field& f, int m);

/// Weight Σ_{|α|<=m} |ξ^α|².
double sobolev_weight(const Vec3& xi, int m);

/// Real L² inner product of two fields given by their spectra.
double inner_product(const Spectrum& a, const Spectrum& b);

}  // namespace visco
