#include "visco/modes.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace visco {

namespace {

std::atomic<bool> g_mutation{false};

struct RootPair {
  std::complex<double> plus, minus;
  bool confluent;
};

RootPair damped_roots(double a, double b, double k) {
  const double k2 = k * k;
  const double disc = k2 * (a * a * k2 - 4.0 * b);
  RootPair r;
  r.confluent = std::abs(disc) <= kConfluenceTol * (1.0 + a * a * k2 * k2);
  if (k == 0.0) {
    r.plus = r.minus = 0.0;
    return r;
  }
  if (disc >= 0.0) {
    const double minus = -0.5 * (a * k2 + std::sqrt(disc));
    r.minus = minus;
    // Vieta keeps the small root accurate when a k² dominates
    r.plus = minus != 0.0 ? b * k2 / minus : 0.0;
  } else {
    const double re = -0.5 * a * k2;
    const double im = 0.5 * std::sqrt(-disc);
    r.plus = {re, im};
    r.minus = {re, -im};
  }
  return r;
}

// sinh(z)/z and cosh(z) as functions of z² (real, either sign).
void sinhc_cosh(double z2, double& sc, double& ch) {
  if (std::abs(z2) < 0.25) {
    // Taylor series up to z^14; remainder below 1e-16 for |z| < 0.5
    double term_s = 1.0;
    double term_c = 1.0;
    sc = 1.0;
    ch = 1.0;
    for (int n = 1; n <= 7; ++n) {
      term_s *= z2 / ((2.0 * n) * (2.0 * n + 1.0));
      term_c *= z2 / ((2.0 * n - 1.0) * (2.0 * n));
      sc += term_s;
      ch += term_c;
    }
    return;
  }
  if (z2 > 0.0) {
    const double z = std::sqrt(z2);
    sc = std::sinh(z) / z;
    ch = std::cosh(z);
  } else {
    const double z = std::sqrt(-z2);
    sc = std::sin(z) / z;
    ch = std::cos(z);
  }
}

}  // namespace

void set_kernel_mutation(bool flip_s_minus) { g_mutation.store(flip_s_minus); }
bool kernel_mutation() { return g_mutation.load(); }

ModeEigen eigenvalues(const ModelParams& p, double k) {
  if (!(k >= 0.0)) throw std::invalid_argument("wavenumber magnitude must be nonnegative");
  ModeEigen e;
  e.k = k;
  const RootPair s = damped_roots(p.nu, p.beta * p.beta, k);
  const RootPair c = damped_roots(p.nu + p.nu_tilde(), p.beta * p.beta + p.gamma * p.gamma, k);
  e.mu = {s.plus, s.minus, c.plus, c.minus};
  e.confluent_shear = s.confluent;
  e.confluent_comp = c.confluent;
  return e;
}

std::array<double, 3> branch_factors(double a, double b, double k, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  const double k2 = k * k;
  const double mbar = -0.5 * a * k2;
  const double delta2 = 0.25 * k2 * (a * a * k2 - 4.0 * b);  // ((μ₁−μ₂)/2)²
  const double z2 = delta2 * t * t;

  if (z2 > 400.0) {
    // strongly overdamped: (μ₁−μ₂)t large, divided differences are well conditioned
    const double d = std::sqrt(delta2);
    const double mu2 = mbar - d;
    const double mu1 = b * k2 / mu2;
    const double e1 = std::exp(mu1 * t);
    const double e2 = std::exp(mu2 * t);
    const double den = mu1 - mu2;
    return {(e1 - e2) / den, (mu1 * e1 - mu2 * e2) / den, (mu1 * e2 - mu2 * e1) / den};
  }
  double sc = 0.0;
  double ch = 0.0;
  sinhc_cosh(z2, sc, ch);
  const double e = std::exp(mbar * t);
  const double minus = t * e * sc;
  const double plus = e * (ch + mbar * t * sc);
  return {minus, plus, plus - 2.0 * mbar * minus};
}

KernelFactors kernel_factors(const ModelParams& p, double k, double t) {
  const auto s = branch_factors(p.nu, p.beta * p.beta, k, t);
  const auto c = branch_factors(p.nu + p.nu_tilde(), p.beta * p.beta + p.gamma * p.gamma, k, t);
  KernelFactors f;
  f.s_minus = g_mutation.load() ? -s[0] : s[0];
  f.s_plus = s[1];
  f.s_zero = s[2];
  f.c_minus = c[0];
  f.c_plus = c[1];
  f.c_zero = c[2];
  return f;
}

}  // namespace visco
