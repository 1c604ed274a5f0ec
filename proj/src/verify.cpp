#include "visco/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "visco/data.hpp"
#include "visco/expm.hpp"
#include "visco/io.hpp"
#include "visco/kernel.hpp"
#include "visco/kinematics.hpp"
#include "visco/nonlinear.hpp"
#include "visco/spectral.hpp"
#include "visco/state.hpp"

namespace visco {

bool VerifyReport::all_passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  j["passed"] = all_passed();
  j["suites"] = nlohmann::json::array();
  for (const auto& s : suites) {
    j["suites"].push_back({{"name", s.name},
                           {"passed", s.passed},
                           {"measured", s.measured},
                           {"tolerance", s.tolerance},
                           {"detail", s.detail}});
  }
  return j;
}

double factor_ode_residual(double a, double b, double k, const std::vector<double>& times, double h) {
  double worst = 0.0;
  for (int which = 0; which < 3; ++which) {
    double scale = 0.0, res = 0.0;
    for (double t : times) {
      const double t0 = std::max(t, h);
      const double xm = branch_factors(a, b, k, t0 - h)[which];
      const double x0 = branch_factors(a, b, k, t0)[which];
      const double xp = branch_factors(a, b, k, t0 + h)[which];
      const double d1 = (xp - xm) / (2.0 * h);
      const double d2 = (xp - 2.0 * x0 + xm) / (h * h);
      res = std::max(res, std::abs(d2 + a * k * k * d1 + b * k * k * x0));
      scale = std::max(scale, std::abs(d2) + a * k * k * std::abs(d1) + b * k * k * std::abs(x0));
    }
    if (scale > 0.0) worst = std::max(worst, res / scale);
  }
  return worst;
}

namespace {

using Suite = std::function<SuiteResult(const VerifyOptions&, std::mt19937_64&)>;

SuiteResult finish(std::string name, double measured, double tol, std::string detail = {}) {
  return {std::move(name), measured <= tol && std::isfinite(measured), measured, tol, std::move(detail)};
}

Vec3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Vec3 v{nd(rng), nd(rng), nd(rng)};
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  for (auto& x : v) x /= n;
  return v;
}

Mode13 random_constrained(const Vec3& xi, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::Matrix<Complex, 6, 1> z;
  for (int i = 0; i < 6; ++i) z(i) = Complex(nd(rng), nd(rng));
  return manifold_basis(xi) * z;
}

double oracle_error(const ModelParams& p, const Vec3& xi, double t, std::mt19937_64& rng) {
  const Mode13 u = random_constrained(xi, rng);
  const Mode13 k = kernel_apply_point(p, xi, t, u);
  const Mode13 ref = expm(Eigen::MatrixXcd(t * generator_matrix(p, xi))) * u;
  return (k - ref).norm() / std::max(ref.norm(), 1e-300);
}

SuiteResult suite_identities(const VerifyOptions& o, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 3.0);
  double worst = 0.0;
  for (int set = 0; set < 5; ++set) {
    ModelParams p = set == 0 ? o.params : ModelParams{u(rng), u(rng) - 0.2, u(rng), u(rng)};
    for (int i = 0; i < 60; ++i) {
      const double k = std::pow(10.0, -3.0 + 6.0 * i / 59.0);
      const auto e = eigenvalues(p, k);
      const double k2 = k * k, b2 = p.beta * p.beta, s2 = b2 + p.gamma * p.gamma;
      worst = std::max({worst, std::abs(e.mu[0] * e.mu[1] - b2 * k2) / (b2 * k2),
                        std::abs(e.mu[0] + e.mu[1] + p.nu * k2) / (std::abs(e.mu[0]) + std::abs(e.mu[1])),
                        std::abs(e.mu[2] * e.mu[3] - s2 * k2) / (s2 * k2),
                        std::abs(e.mu[2] + e.mu[3] + (p.nu + p.nu_tilde()) * k2) /
                            (std::abs(e.mu[2]) + std::abs(e.mu[3]))});
    }
  }
  return finish("identities", worst, 1e-12, "product and sum of root pairs, 5 parameter sets x 60 shells");
}

SuiteResult suite_kernel_oracle(const VerifyOptions& o, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lk(-1.5, 1.0), ut(0.0, 4.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double k = std::pow(10.0, lk(rng));
    Vec3 xi = random_direction(rng);
    for (auto& x : xi) x *= k;
    worst = std::max(worst, oracle_error(o.params, xi, ut(rng), rng));
  }
  return finish("kernel_oracle", worst, 1e-8, "100 random (xi, t) against the 13x13 matrix exponential");
}

SuiteResult suite_near_confluent(const VerifyOptions& o, std::mt19937_64& rng) {
  const auto& p = o.params;
  const double shear = 2.0 * p.beta / p.nu;
  const double comp = 2.0 * p.wave_speed() / (p.nu + p.nu_tilde());
  double worst = 0.0;
  for (double k0 : {shear, comp}) {
    for (double dk : {-1e-6, 0.0, 1e-6}) {
      Vec3 xi = random_direction(rng);
      for (auto& x : xi) x *= k0 + dk;
      for (double t : {0.3, 1.0, 3.0}) worst = std::max(worst, oracle_error(p, xi, t, rng));
    }
  }
  return finish("near_confluent", worst, 1e-8, "shells 2 beta/nu and 2 sqrt(beta^2+gamma^2)/(nu+nu~) +- 1e-6");
}

struct ProjectionErrors {
  double algebra = 0.0;
  double exponential = 0.0;
};

ProjectionErrors projection_errors(const ModelParams& p, std::mt19937_64& rng, int samples) {
  std::normal_distribution<double> nd;
  ProjectionErrors err;
  int used = 0;
  while (used < samples) {
    const Vec3 xi{nd(rng), nd(rng), nd(rng)};
    const double k = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    const auto e = eigenvalues(p, k);
    if (std::abs(e.mu[0] - e.mu[1]) < 1e-3 * k || std::abs(e.mu[2] - e.mu[3]) < 1e-3 * k) continue;
    ++used;
    const auto pr = eigenprojections(p, xi);
    const Matrix6 minus_a = -damped_wave_matrix(p, xi);
    Matrix6 sum = Matrix6::Zero(), spectral = Matrix6::Zero();
    const double t = 0.7;
    for (int i = 0; i < 4; ++i) {
      const double s = 1.0 + pr[i].norm();
      sum += pr[i];
      spectral += std::exp(e.mu[i] * t) * pr[i];
      err.algebra = std::max(err.algebra, (pr[i] * pr[i] - pr[i]).norm() / s);
      err.algebra =
          std::max(err.algebra, (minus_a * pr[i] - e.mu[i] * pr[i]).norm() / ((1.0 + minus_a.norm()) * s));
      for (int j = 0; j < 4; ++j) {
        if (j != i) {
          err.algebra = std::max(err.algebra, (pr[i] * pr[j]).norm() / (1.0 + pr[i].norm() * pr[j].norm()));
        }
      }
    }
    err.algebra = std::max(err.algebra, (sum - Matrix6::Identity()).norm());
    const Eigen::MatrixXcd ref = expm(Eigen::MatrixXcd(-t * damped_wave_matrix(p, xi)));
    err.exponential = std::max(err.exponential, (spectral - ref).norm() / ref.norm());
  }
  return err;
}

SuiteResult suite_projections(const VerifyOptions& o, std::mt19937_64& rng) {
  return finish("projections", projection_errors(o.params, rng, 100).algebra, 1e-10,
                "idempotence, annihilation, resolution of identity, eigen-relation at 100 random xi");
}

SuiteResult suite_spectral_exponential(const VerifyOptions& o, std::mt19937_64& rng) {
  return finish("spectral_exponential", projection_errors(o.params, rng, 100).exponential, 1e-9,
                "sum of exp(mu_j t) Pi_j against the matrix exponential");
}

SuiteResult suite_ode(const VerifyOptions& o, std::mt19937_64&) {
  const auto& p = o.params;
  std::vector<double> times;
  for (int i = 1; i <= 20; ++i) times.push_back(0.25 * i);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double k = 0.3 * std::pow(10.0, i / 19.0);
    worst = std::max(worst, factor_ode_residual(p.nu, p.beta * p.beta, k, times));
    worst = std::max(worst, factor_ode_residual(p.nu + p.nu_tilde(), p.beta * p.beta + p.gamma * p.gamma, k, times));
  }
  return finish("ode_residuals", worst, 1e-6, "20 shells in [0.3, 3] x 20 times, both branches");
}

SuiteResult suite_semigroup(const VerifyOptions& o, std::mt19937_64& rng) {
  const auto g = make_grid(o.grid_n, 2.0 * std::numbers::pi);
  const StateU u = random_linear_state(g, 1.0, rng());
  const StateU a = semigroup_apply(o.params, semigroup_apply(o.params, u, 0.4), 0.9);
  const StateU b = semigroup_apply(o.params, u, 1.3);
  const auto fa = to_physical(a), fb = to_physical(b);
  double comp = 0.0;
  auto diff = [&](const Field& x, const Field& y) {
    for (std::size_t i = 0; i < x.raw().size(); ++i) comp = std::max(comp, std::abs(x.raw()[i] - y.raw()[i]));
  };
  diff(fa.phi, fb.phi);
  diff(fa.w, fb.w);
  diff(fa.Psi, fb.Psi);
  return finish("semigroup", comp, 1e-10, "e^{-0.9L} e^{-0.4L} U against e^{-1.3L} U, unit-amplitude data");
}

SuiteResult suite_constraint(const VerifyOptions& o, std::mt19937_64& rng) {
  const auto g = make_grid(o.grid_n, 2.0 * std::numbers::pi);
  const StateU u = random_linear_state(g, 1.0, rng());
  double drift = 0.0;
  for (double t : {0.1, 1.0, 5.0}) drift = std::max(drift, constraint_defect(semigroup_apply(o.params, u, t)));
  return finish("constraint_drift", drift, 1e-12, "max |phi + tr Psi| along the exact linear flow");
}

// Smooth random displacement and velocity with max |∇ψ̃₀| = max |v₀| = amplitude.
PrimitiveState smooth_primitive(const SpectralGrid& g, double amplitude, std::uint64_t seed) {
  const StateU r = random_linear_state(g, 1.0, seed, 1.0);
  Spectrum psit = potential_from_gradient(r.Psi);
  psit *= amplitude / max_abs(inverse(gradient(psit)));
  Field v = inverse(r.w);
  v *= amplitude / max_abs(v);
  return primitive_from_displacement(psit, v);
}

SuiteResult suite_kinematics(const VerifyOptions& o, std::mt19937_64& rng) {
  const auto g = make_grid(o.grid_n, 2.0 * std::numbers::pi);
  const PrimitiveState s0 = smooth_primitive(g, 1e-2, rng());
  const PrimitiveState& s = s0;
  const StateU u = state_from_primitive(s);
  const PrimitiveState back = primitive_from_state(u);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.F.raw().size(); ++i) worst = std::max(worst, std::abs(s.F.raw()[i] - back.F.raw()[i]));
  for (std::size_t i = 0; i < s.rho.raw().size(); ++i) {
    worst = std::max(worst, std::abs(s.rho.raw()[i] - back.rho.raw()[i]));
  }
  Field G = s.F;
  for (std::size_t i = 0; i < G.size(); ++i)
    for (int j = 0; j < 3; ++j) G(tidx(j, j), i) -= 1.0;
  const Field G2 = G_from_grad_psitilde(grad_psitilde_from_G(G));
  for (std::size_t i = 0; i < G.raw().size(); ++i) worst = std::max(worst, std::abs(G.raw()[i] - G2.raw()[i]));
  return finish("kinematics", worst, 1e-9, "u -> U -> u and G -> grad psi~ -> G at amplitude 1e-2");
}

SuiteResult suite_nonlinear(const VerifyOptions& o, std::mt19937_64& rng) {
  const auto g = make_grid(o.grid_n, 2.0 * std::numbers::pi);
  const PrimitiveState s0 = smooth_primitive(g, 2e-2, rng());
  const StateU u = state_from_primitive(s0);
  const StateU n = nonlinear_terms(o.params, u, solve_kinematics(u));
  return finish("nonlinear", n1_trace_n3_defect(n), 1e-11, "max |N1 + tr N3|");
}

SuiteResult suite_piola(const VerifyOptions& o, std::mt19937_64& rng) {
  const auto g = make_grid(o.grid_n, 2.0 * std::numbers::pi);
  const PrimitiveState s0 = smooth_primitive(g, 1e-2, rng());
  const auto rep = constraint_residuals(s0);
  const double worst = std::max({rep.div_rhoF.linf, rep.det.linf, rep.curl.linf});
  return finish("piola", worst, 1e-10, "div(rho F^T), rho det F - 1 and curl compatibility of generated data");
}

const std::vector<std::pair<std::string, Suite>>& suite_table() {
  static const std::vector<std::pair<std::string, Suite>> table{
      {"identities", suite_identities},   {"kernel_oracle", suite_kernel_oracle},
      {"near_confluent", suite_near_confluent}, {"projections", suite_projections},
      {"spectral_exponential", suite_spectral_exponential}, {"ode_residuals", suite_ode},
      {"semigroup", suite_semigroup},     {"constraint_drift", suite_constraint},
      {"kinematics", suite_kinematics},   {"nonlinear", suite_nonlinear},
      {"piola", suite_piola}};
  return table;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& e : suite_table()) n.push_back(e.first);
    return n;
  }();
  return names;
}

VerifyReport verify(const VerifyOptions& opt) {
  const auto& all = suite_table();
  for (const auto& s : opt.suites) {
    if (std::none_of(all.begin(), all.end(), [&](const auto& e) { return e.first == s; })) {
      throw std::invalid_argument("unknown verification suite '" + s + "'");
    }
  }
  opt.params.validate();

  const bool previous = kernel_mutation();
  set_kernel_mutation(opt.mutate_kernel);
  VerifyReport report;
  for (const auto& [name, run] : all) {
    if (!opt.suites.empty() && !opt.suites.count(name)) continue;
    std::mt19937_64 rng(opt.seed ^ fnv1a64(name));
    try {
      report.suites.push_back(run(opt, rng));
    } catch (const std::exception& e) {
      report.suites.push_back({name, false, std::numeric_limits<double>::quiet_NaN(), 0.0,
                               std::string("exception: ") + e.what()});
    }
  }
  set_kernel_mutation(previous);
  return report;
}

}  // namespace visco
