// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "visco/data.hpp"
#include "visco/decay.hpp"
#include "visco/energy.hpp"
#include "visco/experiment.hpp"
#include "visco/kernel.hpp"
#include "visco/kinematics.hpp"
#include "visco/modes.hpp"
#include "visco/radial.hpp"
#include "visco/simulation.hpp"
#include "visco/spectral.hpp"
#include "visco/state.hpp"

using namespace visco;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Vec3 v{nd(rng), nd(rng), nd(rng)};
  const double n = std::hypot(v[0], v[1], v[2]);
  for (auto& x : v) x /= n;
  return v;
}

Vec3 scaled(Vec3 v, double k) {
  for (auto& x : v) x *= k;
  return v;
}

ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 3.0);
  ModelParams p;
  p.nu = u(rng);
  p.nu_prime = u(rng) - 0.2;
  p.beta = u(rng);
  p.gamma = u(rng);
  p.validate();
  return p;
}

Mode13 constrained_mode(const Vec3& xi, std::mt19937_64& rng) {
  // φ̂ = −iξ·ψ̂, Ψ̂ = iψ̂ξᵀ built by hand from random (ψ̂, ŵ)
  std::normal_distribution<double> nd;
  const Complex I(0.0, 1.0);
  Complex psi[3], w[3];
  for (int j = 0; j < 3; ++j) {
    psi[j] = Complex(nd(rng), nd(rng));
    w[j] = Complex(nd(rng), nd(rng));
  }
  Mode13 u;
  u(0) = -I * (xi[0] * psi[0] + xi[1] * psi[1] + xi[2] * psi[2]);
  for (int j = 0; j < 3; ++j) u(1 + j) = w[j];
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) u(4 + 3 * j + k) = I * psi[j] * xi[k];
  return u;
}

double max_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.raw().size(); ++i) d = std::max(d, std::abs(a.raw()[i] - b.raw()[i]));
  return d;
}

double state_diff(const StateU& a, const StateU& b) {
  const auto fa = to_physical(a), fb = to_physical(b);
  return std::max({max_diff(fa.phi, fb.phi), max_diff(fa.w, fb.w), max_diff(fa.Psi, fb.Psi)});
}

// ---------------------------------------------------------------------------

Outcome c1_identities() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int set = 0; set < 5; ++set) {
    const ModelParams p = random_params(rng);
    const double b2 = p.beta * p.beta, s2 = b2 + p.gamma * p.gamma;
    for (int i = 0; i < 60; ++i) {
      const double k = std::pow(10.0, -3.0 + 6.0 * i / 59.0), k2 = k * k;
      const auto e = eigenvalues(p, k);
      const auto& m = e.mu;
      worst = std::max({worst, std::abs(m[0] * m[1] - b2 * k2) / (b2 * k2),
                        std::abs(m[0] + m[1] + p.nu * k2) / (std::abs(m[0]) + std::abs(m[1])),
                        std::abs(m[2] * m[3] - s2 * k2) / (s2 * k2),
                        std::abs(m[2] + m[3] + (p.nu + p.nu_tilde()) * k2) / (std::abs(m[2]) + std::abs(m[3]))});
    }
  }
  return {worst <= 1e-12, fmt("worst relative residual %.3g (tol 1e-12), 5 sets x 60 shells", worst)};
}

Outcome c2_kernel_oracle() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> lk(-2.0, 1.3), ut(0.0, 5.0), off(-1.0, 1.0);
  ModelParams base;
  double worst = 0.0;
  int near = 0;
  for (int i = 0; i < 200; ++i) {
    const ModelParams p = i % 2 ? random_params(rng) : base;
    double k;
    if (i % 4 == 0) {
      // confluent shells of the two branches, approached from both sides down to exact coincidence
      const double shear = 2.0 * p.beta / p.nu;
      const double comp = 2.0 * p.wave_speed() / (p.nu + p.nu_tilde());
      const double k0 = (i / 4) % 2 ? comp : shear;
      constexpr double offsets[3] = {0.0, 1e-9, 1e-4};
      const double rel = offsets[(i / 8) % 3] * off(rng);
      k = k0 * (1.0 + rel);
      ++near;
    } else {
      k = std::pow(10.0, lk(rng));
    }
    const Vec3 xi = scaled(random_unit(rng), k);
    const double t = ut(rng);
    const Mode13 u = constrained_mode(xi, rng);
    const Matrix13 gen = generator_matrix(p, xi);
    const Matrix13 ref_map = (t * gen).exp();
    const Mode13 ref = ref_map * u;
    const Mode13 got = kernel_apply_point(p, xi, t, u);
    worst = std::max(worst, (got - ref).norm() / std::max(ref.norm(), 1e-300));
  }
  return {worst <= 1e-8, fmt("worst relative error %.3g (tol 1e-8), 200 samples, %d near-confluent", worst, near)};
}

Outcome c3_projections() {
  std::mt19937_64 rng(303);
  std::normal_distribution<double> nd;
  ModelParams p;
  double algebra = 0.0, expo = 0.0;
  int used = 0;
  while (used < 100) {
    const Vec3 xi = scaled(random_unit(rng), std::exp(nd(rng)));
    const double k = std::hypot(xi[0], xi[1], xi[2]);
    const auto e = eigenvalues(p, k);
    if (std::abs(e.mu[0] - e.mu[1]) < 1e-3 * k || std::abs(e.mu[2] - e.mu[3]) < 1e-3 * k) continue;
    ++used;
    const auto pr = eigenprojections(p, xi);
    const Matrix6 minus_a = -damped_wave_matrix(p, xi);
    const double na = minus_a.norm();
    Matrix6 sum = Matrix6::Zero(), spectral = Matrix6::Zero();
    const double t = 0.25 + 0.05 * (used % 40);
    for (int i = 0; i < 4; ++i) {
      const double s = 1.0 + pr[i].norm();
      sum += pr[i];
      spectral += std::exp(e.mu[i] * t) * pr[i];
      algebra = std::max(algebra, (pr[i] * pr[i] - pr[i]).norm() / s);
      algebra = std::max(algebra, (minus_a * pr[i] - e.mu[i] * pr[i]).norm() / ((1.0 + na) * s));
      for (int j = 0; j < 4; ++j) {
        if (j != i) algebra = std::max(algebra, (pr[i] * pr[j]).norm() / (1.0 + pr[i].norm() * pr[j].norm()));
      }
    }
    algebra = std::max(algebra, (sum - Matrix6::Identity()).norm());
    const Matrix6 ref = (t * minus_a).exp();
    expo = std::max(expo, (spectral - ref).norm() / ref.norm());
  }
  return {algebra <= 1e-10 && expo <= 1e-9,
          fmt("projection algebra %.3g (tol 1e-10), spectral exponential %.3g (tol 1e-9), 100 xi", algebra, expo)};
}

// Five-point stencils; the fast root at the largest shell is ~ a k².
double ode_residual(double a, double b, double k, double t, int which, double h) {
  auto x = [&](double s) { return branch_factors(a, b, k, s)[which]; };
  const double f0 = x(t), fp1 = x(t + h), fm1 = x(t - h), fp2 = x(t + 2 * h), fm2 = x(t - 2 * h);
  const double d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
  const double d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
  const double scale = std::abs(d2) + a * k * k * std::abs(d1) + b * k * k * std::abs(f0);
  return scale > 0.0 ? std::abs(d2 + a * k * k * d1 + b * k * k * f0) / scale : 0.0;
}

Outcome c4_ode() {
  ModelParams p;
  const double branches[2][2] = {{p.nu, p.beta * p.beta},
                                 {p.nu + p.nu_tilde(), p.beta * p.beta + p.gamma * p.gamma}};
  double worst = 0.0;
  for (const auto& br : branches) {
    for (int i = 0; i < 20; ++i) {
      const double k = std::pow(10.0, -1.0 + 2.0 * i / 19.0);
      const double h = std::min(1e-3, 0.05 / (br[0] * k * k));
      for (int j = 1; j <= 20; ++j) {
        const double t = 0.25 * j;
        for (int which = 0; which < 3; ++which) worst = std::max(worst, ode_residual(br[0], br[1], k, t, which, h));
      }
    }
  }
  return {worst <= 1e-6, fmt("worst normalized residual %.3g (tol 1e-6), 2 branches x 20 shells x 20 times", worst)};
}

Outcome c5_semigroup() {
  const auto g = make_grid(32, 2.0 * std::numbers::pi);
  ModelParams p;
  const StateU u = random_linear_state(g, 1.0, 505);
  const double comp = state_diff(semigroup_apply(p, semigroup_apply(p, u, 0.4), 0.9), semigroup_apply(p, u, 1.3));
  const double d0 = constraint_defect(u);
  double drift = 0.0;
  for (double t : {0.1, 0.5, 1.0, 3.0, 10.0}) drift = std::max(drift, constraint_defect(semigroup_apply(p, u, t)));
  return {comp <= 1e-10 && drift <= 1e-12,
          fmt("composition %.3g (tol 1e-10), max |phi + tr Psi| %.3g from %.3g (tol 1e-12)", comp, drift, d0)};
}

struct KinematicsProbe {
  double g_roundtrip = 0.0;
  double psi_roundtrip = 0.0;
  double ratio = 0.0;
};

KinematicsProbe kinematics_probe(const SpectralGrid& g, double amplitude) {
  const StateU r = random_linear_state(g, 1.0, 606, 1.0);
  Spectrum psit = potential_from_gradient(r.Psi);
  psit *= amplitude / max_abs(inverse(gradient(psit)));
  Field v = inverse(r.w);
  v *= amplitude / max_abs(v);
  const PrimitiveState s = primitive_from_displacement(psit, v);

  KinematicsProbe out;
  Field G = s.F;
  for (std::size_t i = 0; i < G.size(); ++i)
    for (int j = 0; j < 3; ++j) G(tidx(j, j), i) -= 1.0;
  out.g_roundtrip = max_diff(G, G_from_grad_psitilde(grad_psitilde_from_G(G)));

  Field phi(g, Rank::scalar);
  for (std::size_t i = 0; i < g.physical_size(); ++i) phi(0, i) = s.rho(0, i) - 1.0;
  const Spectrum phi_hat = forward(phi);
  const Spectrum psi = psi_from_psitilde(phi_hat, psit);
  const GammaResult back = gamma_solve_psitilde(phi_hat, psi);
  out.psi_roundtrip = max_abs(inverse(gradient(psit)) - inverse(back.A)) / amplitude;
  out.ratio = back.ratio;
  return out;
}

Outcome c6_kinematics() {
  const auto g = make_grid(32, 2.0 * std::numbers::pi);
  const KinematicsProbe a = kinematics_probe(g, 1e-2);
  const KinematicsProbe b = kinematics_probe(g, 5e-3);
  const KinematicsProbe c = kinematics_probe(g, 2.5e-3);
  const double rt = std::max(a.g_roundtrip, a.psi_roundtrip);
  const bool ok = rt <= 1e-9 && a.ratio < 0.2 && b.ratio < a.ratio && c.ratio < b.ratio;
  return {ok, fmt("round trips %.3g (tol 1e-9); Gamma ratio %.3g / %.3g / %.3g at amplitude 1e-2 / 5e-3 / 2.5e-3",
                  rt, a.ratio, b.ratio, c.ratio)};
}

ExperimentResult& radial_run() {
  static ExperimentResult res = [] {
    ExperimentConfig c;
    c.mode = ExperimentMode::linear_radial;
    c.t_start = 20.0;
    c.t_end = 200.0;
    c.samples = 24;
    c.fit_t0 = 20.0;
    c.fit_t1 = 200.0;
    c.compare_beta_zero = true;
    return run_experiment(c);
  }();
  return res;
}

Outcome c7_radial_rates() {
  const auto& f = radial_run().series.fits;
  const double l2 = f.at(2.0).slope, l4 = f.at(4.0).slope, li = f.at(kInf).slope;
  const bool ok = l2 >= 0.65 && l2 <= 0.85 && l4 >= 1.2 && l4 <= 1.55 && li >= 1.8 && li <= 2.2;
  return {ok, fmt("exponents on [20, 200]: L2 %.4f in [0.65, 0.85], L4 %.4f in [1.2, 1.55], Linf %.4f in [1.8, 2.2]",
                  l2, l4, li)};
}

Outcome c8_diffusion_wave() {
  const auto& r = radial_run();
  const double wave = r.series.fits.at(kInf).slope;
  const double heat = r.heat_reference->fits.at(kInf).slope;
  const double margin = wave - std::max(1.5, heat);
  return {margin >= 0.3,
          fmt("Linf exponent %.4f vs heat flow %.4f on the same data (reference 1.5): margin %.4f (need >= 0.3)", wave,
              heat, margin)};
}

Outcome c9_nonlinear() {
  const auto g = make_grid(64, 32.0);
  DataSpec d;
  d.mode = DataMode::random_smooth;
  d.amplitude = 1e-2;
  d.radius = 8.0;
  d.velocity = 1.0;
  const StateU u0 = state_from_primitive(make_primitive(g, d));

  SimulationOptions o;
  o.t_end = 5.5;
  for (int i = 0; i <= 11; ++i) o.output_times.push_back(0.5 * i);
  o.norms = {2.0};
  o.support_radius = d.radius;
  const Trajectory nl = run_simulation(u0, o);
  o.nonlinear = false;
  o.residuals = false;
  const Trajectory li = run_simulation(u0, o);

  double resid = 0.0, n13 = 0.0;
  for (const auto& r : nl.residuals) {
    resid = std::max({resid, r.report.div_rhoF.linf, r.report.det.linf, r.report.curl.linf, r.phi_trace});
    n13 = std::max(n13, r.n1_trace_n3);
  }
  const auto a = nl.series(2.0), b = li.series(2.0);
  bool monotone = true;
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (nl.times[i - 1] >= 1.0 && a[i] > a[i - 1]) monotone = false;
  }
  const double ratio = a.back() / b.back();
  const bool ok = resid <= 1e-6 && n13 <= 1e-11 && monotone && ratio >= 0.5 && ratio <= 2.0 && !nl.truncated;
  return {ok, fmt("64^3 to t=%.2f (%d steps): invariant residuals %.3g (tol 1e-6), N1+trN3 %.3g (tol 1e-11), "
                  "L2 %s after t=1, nonlinear/linear L2 at end %.6f",
                  nl.times.back(), nl.steps, resid, n13, monotone ? "non-increasing" : "INCREASES", ratio)};
}

Outcome c10_energy() {
  const auto g = make_grid(32, 24.0);
  ModelParams p;
  const CutoffSpec cut{p.m1()};
  const StateU r = random_linear_state(g, 1.0, 1010, 0.02);
  const StateU u0(frequency_split(r.phi, cut).second, frequency_split(r.w, cut).second,
                  frequency_split(r.Psi, cut).second);

  std::vector<double> t, logE;
  bool coercive = true;
  for (int i = 0; i <= 20; ++i) {
    const double s = 0.25 * i;
    const auto e = hf_energy(p, semigroup_apply(p, u0, s), {}, s);
    coercive = coercive && e.E >= 0.5 * e.h2_sq;
    t.push_back(s);
    logE.push_back(std::log(e.E));
  }
  double min_rate = kInf, min_avg = kInf;
  for (std::size_t i = 1; i < t.size(); ++i) {
    min_rate = std::min(min_rate, (logE[i - 1] - logE[i]) / (t[i] - t[i - 1]));
    min_avg = std::min(min_avg, (logE[0] - logE[i]) / t[i]);
  }
  const bool ok = coercive && min_rate > 0.0 && min_avg > 0.0;
  return {ok, fmt("E >= H2/2: %s; slowest interval decay of log E %.4f, log E(0) - log E(t) >= %.4f t on [0, 5]",
                  coercive ? "yes" : "NO", min_rate, min_avg)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "root identities", 1.0, c1_identities},
      {2, "kernel vs matrix exponential", 10.0, c2_kernel_oracle},
      {3, "eigenprojection algebra", 5.0, c3_projections},
      {4, "kernel factor ODEs", 1.0, c4_ode},
      {5, "semigroup law on 32^3", 30.0, c5_semigroup},
      {6, "kinematics round trips", 30.0, c6_kinematics},
      {7, "radial decay rates", 120.0, c7_radial_rates},
      {8, "diffusion-wave signature", 120.0, c8_diffusion_wave},
      {9, "nonlinear 64^3 run", 600.0, c9_nonlinear},
      {10, "high-frequency energy", 60.0, c10_energy},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.ok && in_time;
    if (!pass) ++failed;
    std::printf("%s criterion %2d (%s): %s [%.2f s, budget %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id,
                c.title.c_str(), o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
