#include "visco/energy.hpp"

#include <algorithm>
#include <cmath>

#include "visco/kinematics.hpp"

namespace visco {

double default_c1(const ModelParams& p, double m1) {
  const double b2 = p.beta * p.beta;
  const double g2 = p.gamma * p.gamma;
  const double visc = 1.0 / (2.0 * (p.nu / b2 + p.nu_tilde() / g2 + 2.0 / p.nu));
  return 0.9 * std::min({visc, b2 * m1 * m1 / 8.0, m1 / 2.0});
}

double C1Policy::resolve(const ModelParams& p, double m1) const {
  if (value) {
    if (!(*value > 0.0)) throw std::invalid_argument("c1 must be positive");
    return *value;
  }
  return default_c1(p, m1);
}

EnergyReport hf_energy(const ModelParams& p, const StateU& u, const Spectrum& A, const C1Policy& policy,
                       double time) {
  const auto& g = u.grid();
  const CutoffSpec cut{p.m1()};
  EnergyReport r;
  r.time = time;
  r.c1 = policy.resolve(p, cut.m1);

  const Spectrum psit = potential_from_gradient(A);
  double h2 = 0.0, cross = 0.0, visc = 0.0, elastic = 0.0;
  for (std::size_t s = 0; s < u.phi.size(); ++s) {
    const Vec3 xi = g.wavevector(s);
    const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    const double hi = cut.high(std::sqrt(k2));
    if (hi == 0.0) continue;
    const double wt = g.hermitian_weight(s) * sobolev_weight(xi, 2) * hi * hi;

    const double phi2 = std::norm(u.phi(0, s));
    double w2 = 0.0, Psi2 = 0.0, wpsi = 0.0;
    Complex divw = 0.0;
    for (int j = 0; j < 3; ++j) {
      w2 += std::norm(u.w(j, s));
      wpsi += std::real(u.w(j, s) * std::conj(psit(j, s)));
      divw += xi[j] * u.w(j, s);
      for (int k = 0; k < 3; ++k) Psi2 += std::norm(A(tidx(j, k), s));
    }
    h2 += wt * (phi2 + w2 + Psi2);
    cross += wt * wpsi;
    visc += wt * (p.nu * k2 * w2 + p.nu_tilde() * std::norm(divw));
    elastic += wt * (p.gamma * p.gamma * phi2 + p.beta * p.beta * Psi2);
  }
  const double n = static_cast<double>(g.physical_size());
  const double scale = g.volume() / (n * n);
  r.h2_sq = h2 * scale;
  r.E = (h2 + r.c1 * cross) * scale;
  r.D = (visc + r.c1 * elastic) * scale;
  return r;
}

EnergyReport hf_energy(const ModelParams& p, const StateU& u, const C1Policy& policy, double time) {
  return hf_energy(p, u, u.Psi, policy, time);
}

}  // namespace visco
