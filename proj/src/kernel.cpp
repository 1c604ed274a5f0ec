#include "visco/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace visco {

namespace {
constexpr Complex I{0.0, 1.0};

double norm2(const Vec3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }
}  // namespace

Matrix13 generator_matrix(const ModelParams& p, const Vec3& xi) {
  Matrix13 m = Matrix13::Zero();
  const double k2 = norm2(xi);
  const double b2 = p.beta * p.beta;
  const double g2 = p.gamma * p.gamma;
  for (int j = 0; j < 3; ++j) {
    m(0, 1 + j) = -I * xi[j];
    m(1 + j, 0) = -I * g2 * xi[j];
    for (int l = 0; l < 3; ++l) {
      m(1 + j, 1 + l) = -(p.nu_tilde() * xi[j] * xi[l] + (j == l ? p.nu * k2 : 0.0));
    }
    for (int k = 0; k < 3; ++k) {
      m(1 + j, 4 + 3 * j + k) = I * b2 * xi[k];
      m(4 + 3 * j + k, 1 + j) = I * xi[k];
    }
  }
  return m;
}

void apply_kernel(const KernelFactors& f, const ModelParams& p, const Vec3& xi, const Complex* in,
                  Complex* out) {
  const double k2 = norm2(xi);
  if (k2 == 0.0) {
    for (int i = 0; i < kStateDim; ++i) out[i] = in[i];
    return;
  }
  const double b2 = p.beta * p.beta;
  const double g2 = p.gamma * p.gamma;
  const Complex phi = in[0];
  const Complex* w = in + 1;
  const Complex* psi = in + 4;

  // Split a vector v into v·ξ/k² (scalar) so that P v = ξ (v·ξ)/k².
  const Complex wxi = (w[0] * xi[0] + w[1] * xi[1] + w[2] * xi[2]);
  Complex psixi[3];
  for (int j = 0; j < 3; ++j) psixi[j] = psi[3 * j] * xi[0] + psi[3 * j + 1] * xi[1] + psi[3 * j + 2] * xi[2];
  const Complex psixi_dot = (psixi[0] * xi[0] + psixi[1] * xi[1] + psixi[2] * xi[2]) / k2;

  out[0] = f.c_zero * phi - I * f.c_minus * wxi;

  // [a(I−P) + bP] v = a v + (b − a) ξ (ξ·v)/k²
  auto mix = [&](Complex a, Complex b, const Complex* v, Complex vdot_over_k2, int j) {
    return a * v[j] + (b - a) * xi[j] * vdot_over_k2;
  };
  const Complex wdot = wxi / k2;
  for (int j = 0; j < 3; ++j) {
    out[1 + j] = -I * g2 * f.c_minus * xi[j] * phi + mix(f.s_plus, f.c_plus, w, wdot, j) +
                 I * b2 * mix(f.s_minus, f.c_minus, psixi, psixi_dot, j);
  }

  Complex sw[3];
  for (int j = 0; j < 3; ++j) sw[j] = mix(f.s_minus, f.c_minus, w, wdot, j);
  // left multiplication of Ψ̂ by s⁰(I−P) + c⁰P, column by column
  for (int k = 0; k < 3; ++k) {
    const Complex col[3] = {psi[k], psi[3 + k], psi[6 + k]};
    const Complex cdot = (col[0] * xi[0] + col[1] * xi[1] + col[2] * xi[2]) / k2;
    for (int j = 0; j < 3; ++j) {
      out[4 + 3 * j + k] = mix(f.s_zero, f.c_zero, col, cdot, j) + I * sw[j] * xi[k];
    }
  }
}

Mode13 kernel_apply_point(const ModelParams& p, const Vec3& xi, double t, const Mode13& u) {
  Mode13 out;
  const KernelFactors f = kernel_factors(p, std::sqrt(norm2(xi)), t);
  apply_kernel(f, p, xi, u.data(), out.data());
  return out;
}

Eigen::Matrix<Complex, kStateDim, 6> manifold_basis(const Vec3& xi) {
  Eigen::Matrix<Complex, kStateDim, 6> v = Eigen::Matrix<Complex, kStateDim, 6>::Zero();
  for (int j = 0; j < 3; ++j) {
    v(0, j) = -I * xi[j];
    v(1 + j, 3 + j) = 1.0;
    for (int k = 0; k < 3; ++k) v(4 + 3 * j + k, j) = I * xi[k];
  }
  return v;
}

Matrix6 damped_wave_matrix(const ModelParams& p, const Vec3& xi) {
  Matrix6 a = Matrix6::Zero();
  const double k2 = norm2(xi);
  const double b2 = p.beta * p.beta;
  const double g2 = p.gamma * p.gamma;
  for (int j = 0; j < 3; ++j) {
    a(j, 3 + j) = -1.0;
    for (int l = 0; l < 3; ++l) {
      const double dj = j == l ? 1.0 : 0.0;
      a(3 + j, l) = b2 * k2 * dj + g2 * xi[j] * xi[l];
      a(3 + j, 3 + l) = p.nu * k2 * dj + p.nu_tilde() * xi[j] * xi[l];
    }
  }
  return a;
}

std::array<Matrix6, 4> eigenprojections(const ModelParams& p, const Vec3& xi) {
  const double k2 = norm2(xi);
  if (k2 == 0.0) throw std::domain_error("eigenprojections are undefined at xi = 0");
  const ModeEigen e = eigenvalues(p, std::sqrt(k2));
  if (e.confluent_shear || e.confluent_comp) {
    throw std::domain_error("eigenprojections are degenerate at a confluent shell");
  }
  Eigen::Matrix3cd proj;
  for (int j = 0; j < 3; ++j) {
    for (int l = 0; l < 3; ++l) proj(j, l) = xi[j] * xi[l] / k2;
  }
  const Eigen::Matrix3cd shear = Eigen::Matrix3cd::Identity() - proj;

  auto block = [](Complex mu_self, Complex mu_other, const Eigen::Matrix3cd& q) {
    Matrix6 m;
    const Complex den = mu_self - mu_other;
    m.block<3, 3>(0, 0) = -mu_other * q / den;
    m.block<3, 3>(0, 3) = q / den;
    m.block<3, 3>(3, 0) = -mu_self * mu_other * q / den;
    m.block<3, 3>(3, 3) = mu_self * q / den;
    return m;
  };
  const auto& mu = e.mu;
  return {block(mu[0], mu[1], shear), block(mu[1], mu[0], shear), block(mu[2], mu[3], proj),
          block(mu[3], mu[2], proj)};
}

}  // namespace visco
