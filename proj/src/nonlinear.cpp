#include "visco/nonlinear.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "visco/errors.hpp"
#include "visco/spectral.hpp"

namespace visco {

namespace {

constexpr Complex I{0.0, 1.0};

Eigen::Matrix3d load(const Field& t, std::size_t i) {
  Eigen::Matrix3d m;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) m(j, k) = t(tidx(j, k), i);
  return m;
}

void store(Field& t, std::size_t i, const Eigen::Matrix3d& m) {
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) t(tidx(j, k), i) = m(j, k);
}

bool finite(const StateU& u) {
  for (const auto* s : {&u.phi, &u.w, &u.Psi})
    for (const Complex& c : s->raw())
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

}  // namespace

Kinematics solve_kinematics(const StateU& u, const GammaOptions& opt, const Spectrum* warm_start) {
  GammaResult r = gamma_solve_gradient(u.phi, u.Psi, opt, warm_start);
  return {std::move(r.A), std::move(r.X), r.iterations, r.ratio};
}

StateU nonlinear_terms(const ModelParams& p, const StateU& u, const Kinematics& aux) {
  const auto& g = u.grid();
  const std::size_t n = g.physical_size();
  const double b2 = p.beta * p.beta;
  const double g2 = p.gamma * p.gamma;
  const PressureModel pressure(p);

  const Field phi = inverse(u.phi);
  const Field w = inverse(u.w);
  const Spectrum gw_s = gradient(u.w);
  const Field gw = inverse(gw_s);                              // ∂_k w^j
  const Field lap_w = inverse(laplacian(u.w));                 // Δw
  const Field grad_div_w = inverse(gradient(divergence(u.w))); // ∇div w
  const Field grad_phi = inverse(gradient(u.phi));
  const Field A = inverse(aux.A);

  Field h(g, Rank::tensor);
  Field D1(g, Rank::tensor);  // φG + GGᵀ + φGGᵀ
  Field phiw(g, Rank::vector);
  Field Aw(g, Rank::vector);
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  for (std::size_t i = 0; i < n; ++i) {
    const double f = phi(0, i);
    const Eigen::Matrix3d a = load(A, i);
    if (!(std::abs(f) < 0.5)) throw IntegrityError("nonlinear terms need |phi| < 1/2");
    if (!(a.norm() < 1.0)) throw IntegrityError("nonlinear terms need |grad psi_tilde| < 1");
    const Eigen::Matrix3d hm = (id - a).inverse() * a * a;
    const Eigen::Matrix3d G = a + hm;
    const Eigen::Matrix3d GGt = G * G.transpose();
    store(h, i, hm);
    store(D1, i, f * G + GGt + f * GGt);
    const Eigen::Vector3d wv(w(0, i), w(1, i), w(2, i));
    const Eigen::Vector3d awv = a * wv;
    for (int j = 0; j < 3; ++j) {
      phiw(j, i) = f * wv(j);
      Aw(j, i) = awv(j);
    }
  }

  const Spectrum h_s = forward(h);
  Spectrum G_s = aux.A;
  G_s += h_s;
  const Field div_G = inverse(row_divergence(G_s));
  const Field div_D1 = inverse(row_divergence(forward(D1)));

  // pointwise part of N₂
  Field local(g, Rank::vector);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = phi(0, i);
    const double r = 1.0 / (1.0 + f);
    const double dp = pressure.dP(1.0 + f) - g2;  // P′(1+φ) − γ²
    for (int j = 0; j < 3; ++j) {
      double adv = 0.0;
      for (int k = 0; k < 3; ++k) adv += w(k, i) * gw(tidx(j, k), i);
      local(j, i) = -adv + f * r * (-p.nu * lap_w(j, i) - p.nu_tilde() * grad_div_w(j, i) + g2 * grad_phi(j, i)) -
                    dp * grad_phi(j, i) * r - b2 * f * r * div_G(j, i) + b2 * r * div_D1(j, i);
    }
  }

  StateU out(g);
  out.w = forward(local);
  Spectrum tail = row_divergence(h_s);
  tail -= row_divergence(transpose(aux.X));
  out.w.axpy(b2, tail);

  const Spectrum phiw_s = forward(phiw);
  const Spectrum Aw_s = forward(Aw);
  out.phi = divergence(phiw_s);
  out.phi *= -1.0;

  // N₃^{jl} = −iξ_l (Aw)_j + iξ_j ξ_l ξ·(φw + Aw)/|ξ|²
  for (std::size_t s = 1; s < out.Psi.size(); ++s) {
    if (g.on_nyquist(s)) continue;
    const Vec3 xi = g.wavevector(s);
    const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    Complex vdot = 0.0;
    for (int d = 0; d < 3; ++d) vdot += xi[d] * (phiw_s(d, s) + Aw_s(d, s));
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) {
        out.Psi(tidx(j, l), s) = -I * xi[l] * Aw_s(j, s) + I * xi[j] * xi[l] * vdot / k2;
      }
  }

  if (g.dealias()) {
    truncate_two_thirds(out.phi);
    truncate_two_thirds(out.w);
    truncate_two_thirds(out.Psi);
  } else {
    zero_nyquist(out.phi);
    zero_nyquist(out.w);
    zero_nyquist(out.Psi);
  }
  return out;
}

double n1_trace_n3_defect(const StateU& n) {
  Spectrum d = trace(n.Psi);
  d += n.phi;
  return max_abs(inverse(d));
}

double dt_max(const ModelParams& p, const SpectralGrid& g) {
  const double kmax = g.dk() * (g.n() / 2);
  return 0.5 / (p.wave_speed() * kmax);
}

EtdStepper::EtdStepper(ModelParams p, StepOptions opt) : p_(p), opt_(opt) {}

StateU EtdStepper::evaluate(const StateU& u, bool keep) {
  Kinematics kin = solve_kinematics(u, opt_.gamma, warm_ ? &*warm_ : nullptr);
  warm_ = kin.A;
  StateU n = nonlinear_terms(p_, u, kin);
  if (keep) {
    last_n_ = n;
    last_kin_ = std::move(kin);
  }
  return n;
}

StateU EtdStepper::step(const StateU& u, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (opt_.enforce_dt_max && dt > dt_max(p_, u.grid()) * (1.0 + 1e-12)) {
    throw std::invalid_argument("time step exceeds dt_max = " + std::to_string(dt_max(p_, u.grid())));
  }
  StateU a = semigroup_apply(p_, u, dt);
  if (!opt_.nonlinear) return a;

  const StateU b = semigroup_apply(p_, evaluate(u, true), dt);
  StateU pred = a;
  pred.axpy(dt, b);
  if (!finite(pred)) throw NumericalError("non-finite predictor stage");
  const StateU n1 = evaluate(pred, false);

  StateU next = std::move(a);
  next.axpy(0.5 * dt, b);
  next.axpy(0.5 * dt, n1);
  if (!finite(next)) throw NumericalError("non-finite state after corrector stage");
  return next;
}

StateU etd_step(const ModelParams& p, const StateU& u, double dt, const StepOptions& opt) {
  EtdStepper s(p, opt);
  return s.step(u, dt);
}

}  // namespace visco
