#include "visco/state.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "visco/kernel.hpp"
#include "visco/log.hpp"
#include "visco/spectral.hpp"

namespace visco {

StateU::StateU(Spectrum phi_, Spectrum w_, Spectrum Psi_)
    : phi(std::move(phi_)), w(std::move(w_)), Psi(std::move(Psi_)) {
  if (phi.rank() != Rank::scalar || w.rank() != Rank::vector || Psi.rank() != Rank::tensor) {
    throw std::invalid_argument("state components have the wrong ranks");
  }
  if (!phi.grid().same_as(w.grid()) || !phi.grid().same_as(Psi.grid())) {
    throw std::invalid_argument("state components live on different grids");
  }
}

StateU& StateU::operator+=(const StateU& o) {
  phi += o.phi;
  w += o.w;
  Psi += o.Psi;
  return *this;
}

StateU& StateU::operator*=(double s) {
  phi *= s;
  w *= s;
  Psi *= s;
  return *this;
}

void StateU::axpy(double a, const StateU& x) {
  phi.axpy(a, x.phi);
  w.axpy(a, x.w);
  Psi.axpy(a, x.Psi);
}

void StateU::gather(std::size_t s, Complex* out) const {
  out[0] = phi(0, s);
  for (int j = 0; j < 3; ++j) out[1 + j] = w(j, s);
  for (int j = 0; j < 9; ++j) out[4 + j] = Psi(j, s);
}

void StateU::scatter(std::size_t s, const Complex* in) {
  phi(0, s) = in[0];
  for (int j = 0; j < 3; ++j) w(j, s) = in[1 + j];
  for (int j = 0; j < 9; ++j) Psi(j, s) = in[4 + j];
}

StateFields to_physical(const StateU& u) { return {inverse(u.phi), inverse(u.w), inverse(u.Psi)}; }

StateU from_physical(const Field& phi, const Field& w, const Field& Psi) {
  return StateU(forward(phi), forward(w), forward(Psi));
}

double constraint_defect(const StateU& u) {
  Spectrum d = trace(u.Psi);
  d += u.phi;
  return max_abs(inverse(d));
}

double state_lp_norm(const StateU& u, double p) {
  const auto& g = u.grid();
  const Field phi = inverse(u.phi);
  const Field w = inverse(u.w);
  const Field Psi = inverse(u.Psi);
  Field packed(g, Rank::scalar);
  for (std::size_t i = 0; i < g.physical_size(); ++i) {
    double a = phi(0, i) * phi(0, i);
    for (int c = 0; c < 3; ++c) a += w(c, i) * w(c, i);
    for (int c = 0; c < 9; ++c) a += Psi(c, i) * Psi(c, i);
    packed(0, i) = std::sqrt(a);
  }
  return lp_norm(packed, p);
}

StateU semigroup_apply(const ModelParams& p, const StateU& u0, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("semigroup time must be nonnegative");
  const auto& g = u0.grid();
  StateU out(g);
  if (t == 0.0) return u0;

  const double defect = constraint_defect(u0);
  const double scale = std::max(max_abs(u0.phi), max_abs(u0.Psi));
  if (defect > 1e-4 * scale + 1e-14) {
    std::ostringstream os;
    os << "semigroup_apply: initial data is off the constraint manifold (defect " << defect << ")";
    log_warn(os.str());
  }

  std::unordered_map<long, KernelFactors> cache;
  Complex in[13];
  Complex res[13];
  for (std::size_t s = 0; s < out.phi.size(); ++s) {
    const auto m = g.lattice(s);
    const long key = static_cast<long>(m[0]) * m[0] + static_cast<long>(m[1]) * m[1] + static_cast<long>(m[2]) * m[2];
    u0.gather(s, in);
    if (key == 0) {
      out.scatter(s, in);
      continue;
    }
    // odd kernel blocks cannot keep a Nyquist coefficient Hermitian; those modes are dropped
    if (g.on_nyquist(s)) continue;
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, kernel_factors(p, g.dk() * std::sqrt(static_cast<double>(key)), t)).first;
    }
    apply_kernel(it->second, p, g.wavevector(s), in, res);
    out.scatter(s, res);
  }
  return out;
}

}  // namespace visco
