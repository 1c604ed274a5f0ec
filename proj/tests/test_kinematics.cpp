#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "visco/data.hpp"
#include "visco/errors.hpp"
#include "visco/kinematics.hpp"
#include "visco/spectral.hpp"

using namespace visco;
using testing_helpers::max_diff;
using testing_helpers::random_field;

namespace {
constexpr double pi = std::numbers::pi;

Field diag_field(const SpectralGrid& g, double a) {
  Field t(g, Rank::tensor);
  for (std::size_t i = 0; i < t.size(); ++i) t(0, i) = a;
  return t;
}

// Random smooth displacement scaled so that max|∇ψ̃| = eps.
Spectrum small_displacement(const SpectralGrid& g, double eps, unsigned seed) {
  Spectrum s = forward(random_field(g, Rank::vector, seed, 1.0));
  truncate_two_thirds(s);
  const Field A = inverse(gradient(s));
  s *= eps / max_abs(A);
  return s;
}

Spectrum det_density(const Spectrum& psi_tilde) {
  const Field A = inverse(gradient(psi_tilde));
  Field phi(A.grid(), Rank::scalar);
  for (std::size_t i = 0; i < A.size(); ++i) {
    Eigen::Matrix3d m;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) m(j, k) = (j == k ? 1.0 : 0.0) - A(tidx(j, k), i);
    phi(0, i) = m.determinant() - 1.0;
  }
  Spectrum s = forward(phi);
  s(0, 0) = 0.0;
  return s;
}
}  // namespace

TEST_CASE("G and grad psi_tilde conversions") {
  auto g = make_grid(8, 2 * pi);
  Field zero(g, Rank::tensor);
  CHECK(max_abs(grad_psitilde_from_G(zero)) == 0.0);
  Field d = grad_psitilde_from_G(diag_field(g, 0.3));
  CHECK(d(0, 5) == doctest::Approx(0.3 / 1.3).epsilon(1e-15));
  CHECK(d(4, 5) == 0.0);

  Field G = random_field(g, Rank::tensor, 21);
  G *= 0.05 / max_abs(G);
  Field back = G_from_grad_psitilde(grad_psitilde_from_G(G));
  CHECK(max_diff(back, G) < 1e-12);

  Field sing = diag_field(g, -1.0);
  CHECK_THROWS_AS(grad_psitilde_from_G(sing), NumericalError);
}

TEST_CASE("h map") {
  auto g = make_grid(8, 2 * pi);
  Field h = h_map(diag_field(g, 0.1));
  CHECK(h(0, 3) == doctest::Approx(0.01 / 0.9).epsilon(1e-14));
  CHECK(max_abs(h_map(Field(g, Rank::tensor))) == 0.0);

  Field A0 = random_field(g, Rank::tensor, 22);
  A0 *= 1.0 / max_abs(A0);
  double prev = -1.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    Field a = A0;
    a *= eps;
    const double q = max_abs(h_map(a)) / (eps * eps);
    CHECK(q < 10.0);
    if (prev > 0) CHECK(std::abs(q - prev) < 0.2 * prev);
    prev = q;
  }
}

TEST_CASE("gamma fixed point") {
  auto g = make_grid(16, 2 * pi);
  Spectrum zero_phi(g, Rank::scalar);
  Spectrum zero_psi(g, Rank::vector);
  auto r0 = gamma_solve_psitilde(zero_phi, zero_psi);
  CHECK(r0.iterations == 1);
  CHECK(max_abs(r0.psi_tilde) == 0.0);

  double prev_ratio = 1.0;
  for (double eps : {1e-2, 1e-3}) {
    Spectrum pt = small_displacement(g, eps, 23);
    Spectrum phi = det_density(pt);
    Spectrum psi = psi_from_psitilde(phi, pt);
    auto r = gamma_solve_psitilde(phi, psi);
    CHECK(max_diff(inverse(r.psi_tilde), inverse(pt)) < 1e-10 * max_abs(inverse(pt)));
    Spectrum psi2 = psi_from_psitilde(phi, r.psi_tilde);
    CHECK(max_diff(inverse(psi2), inverse(psi)) < 1e-10 * max_abs(inverse(psi)));
    CHECK(r.ratio < 0.2);
    CHECK(r.ratio < prev_ratio);
    prev_ratio = r.ratio;
    // mass constraint becomes linear: φ + div ψ = 0
    Spectrum c = divergence(psi);
    c += phi;
    CHECK(max_abs(inverse(c)) < 1e-11);
    // ψ − ψ̃ is second order
    const double d = max_abs(inverse(psi - pt));
    CHECK(d < 5.0 * eps * eps * max_abs(inverse(pt)) / eps);
  }
}

TEST_CASE("trace-free rank-one displacement is a fixed point") {
  auto g = make_grid(16, 8 * pi);
  DataSpec spec{DataMode::rank_one_shear, 0.05, 8.0, 0.0, 1};
  InitialData d = make_initial_data(g, spec);
  Spectrum phi(g, Rank::scalar);
  Spectrum psi = psi_from_psitilde(phi, d.psi_tilde);
  CHECK(max_diff(psi, d.psi_tilde) < 1e-15);
  PrimitiveState s = primitive_from_displacement(d.psi_tilde, d.v);
  double m = 0.0;
  for (double r : s.rho.raw()) m = std::max(m, std::abs(r - 1.0));
  CHECK(m < 1e-14);
  // hypothesis ∇φ₀ − div ᵀ(I+G₀)^{-1} = 0 with φ₀ = 0 reduces to div ᵀ∇ψ̃₀ = ∇div ψ̃₀ = 0
  CHECK(max_abs(inverse(divergence(d.psi_tilde))) < 1e-14);
}

TEST_CASE("primitive data satisfies the physical constraints") {
  auto g = make_grid(16, 2 * pi);
  Spectrum none(g, Rank::vector);
  Field v = random_field(g, Rank::vector, 30);
  PrimitiveState s0 = primitive_from_displacement(none, v);
  CHECK(max_diff(s0.v, v) == 0.0);
  for (std::size_t i = 0; i < s0.rho.size(); i += 97) {
    CHECK(s0.rho(0, i) == 1.0);
    CHECK(s0.F(0, i) == 1.0);
    CHECK(s0.F(1, i) == 0.0);
  }
  auto rep0 = constraint_residuals(s0);
  CHECK(rep0.det.linf == 0.0);
  CHECK(rep0.div_rhoF.linf < 1e-14);
  CHECK(rep0.curl.linf < 1e-14);

  double hyp_prev = 0.0;
  for (double eps : {1e-2, 1e-3}) {
    Spectrum pt = small_displacement(g, eps, 31);
    PrimitiveState s = primitive_from_displacement(pt, v);
    auto rep = constraint_residuals(s);
    CHECK(rep.det.linf < 1e-10);
    CHECK(rep.div_rhoF.linf < 1e-10);
    CHECK(rep.curl.linf < 1e-10);
    Spectrum phi = det_density(pt);
    Spectrum hyp = gradient(phi);
    hyp += gradient(divergence(pt));
    const double h = max_abs(inverse(hyp));
    if (hyp_prev > 0) CHECK(h < 0.02 * hyp_prev);  // O(ε²): factor 100 per decade
    hyp_prev = h;
  }
}

TEST_CASE("corrupted deformation shows up in div(rho F^T)") {
  auto g = make_grid(16, 2 * pi);
  PrimitiveState s{Field(g, Rank::scalar), Field(g, Rank::vector), Field(g, Rank::tensor)};
  s.rho.fill(1.0);
  const double eps = 1e-3;
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const std::size_t idx = (static_cast<std::size_t>(i) * n + j) * n + l;
        s.F(0, idx) = s.F(4, idx) = s.F(8, idx) = 1.0;
        s.F(tidx(0, 1), idx) = eps * std::sin(2.0 * g.position(i, j, l)[0]);
      }
  auto rep = constraint_residuals(s);
  CHECK(rep.div_rhoF.linf == doctest::Approx(2.0 * eps).epsilon(1e-10));
}

TEST_CASE("state conversions") {
  auto g = make_grid(16, 2 * pi);
  PrimitiveState rest{Field(g, Rank::scalar), Field(g, Rank::vector), Field(g, Rank::tensor)};
  rest.rho.fill(1.0);
  for (int c : {0, 4, 8})
    for (std::size_t i = 0; i < rest.F.size(); ++i) rest.F(c, i) = 1.0;
  StateU u0 = state_from_primitive(rest);
  CHECK(max_abs(u0.phi) == 0.0);
  CHECK(max_abs(u0.Psi) == 0.0);
  PrimitiveState back0 = primitive_from_state(u0);
  CHECK(max_diff(back0.F, rest.F) == 0.0);

  Spectrum pt = small_displacement(g, 1e-2, 40);
  Field v = random_field(g, Rank::vector, 41);
  v *= 1e-2 / max_abs(v);
  PrimitiveState s = primitive_from_displacement(pt, v);
  ConversionReport rep;
  StateU u = state_from_primitive(s, &rep);
  CHECK(rep.G_over_gradpsitilde >= 0.5);
  CHECK(rep.G_over_gradpsitilde <= 2.0);
  ConversionReport rep2;
  PrimitiveState s2 = primitive_from_state(u, {}, &rep2);
  CHECK(max_diff(s2.F, s.F) < 1e-9);
  CHECK(max_diff(s2.rho, s.rho) < 1e-9);
  CHECK(max_diff(s2.v, s.v) < 1e-15);
  CHECK(rep2.gamma_ratio < 0.2);
  auto res = constraint_residuals(u);
  CHECK(res.phi_trace.linf < 1e-12);
  CHECK(res.det.linf < 1e-10);
  CHECK(res.div_rhoF.linf < 1e-10);
}
