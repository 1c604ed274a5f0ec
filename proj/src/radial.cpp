#include "visco/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "visco/errors.hpp"
#include "visco/modes.hpp"

namespace visco {

namespace {
constexpr double pi = std::numbers::pi;
}

GaussRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  GaussRule g;
  g.x.resize(order);
  g.w.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= order; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.x[i] = -x;
    g.x[order - 1 - i] = x;
    g.w[i] = g.w[order - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return g;
}

SphericalBessel spherical_bessel(double x) {
  SphericalBessel b;
  if (std::abs(x) < 0.1) {
    const double x2 = x * x;
    b.j0 = 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
    b.j1_over_x = (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0 * (1.0 - x2 / 88.0)))) / 3.0;
  } else {
    const double s = std::sin(x), c = std::cos(x);
    b.j0 = s / x;
    b.j1_over_x = (s / x - c) / (x * x);
  }
  b.j1_prime = b.j0 - 2.0 * b.j1_over_x;
  return b;
}

RadialSpectrum radial_spectrum(const RadialOptions& opt, double k, double t) {
  const auto& d = opt.data;
  const auto& p = opt.params;
  const double env = std::exp(-0.5 * d.sigma * d.sigma * k * k);
  const double phi0 = d.mass * env;
  const double chi0 = d.velocity * d.sigma * d.sigma * env;
  if (opt.heat_reference) return {std::exp(-p.nu * k * k * t) * phi0, 0.0};
  const double b = p.beta * p.beta + p.gamma * p.gamma;
  const auto f = branch_factors(p.nu + p.nu_tilde(), b, k, t);  // {c⁻, c⁺, c⁰}
  return {f[2] * phi0 + k * k * f[0] * chi0, -b * f[0] * phi0 + f[1] * chi0};
}

namespace {

struct Panels {
  std::vector<double> x;
  std::vector<double> w;
};

// Composite Gauss rule on [a, b] with panels no wider than h.
void append_panels(Panels& out, const GaussRule& g, double a, double b, double h) {
  if (!(b > a)) return;
  const int m = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
  const double width = (b - a) / m;
  for (int j = 0; j < m; ++j) {
    const double lo = a + j * width;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      out.x.push_back(lo + 0.5 * width * (g.x[i] + 1.0));
      out.w.push_back(0.5 * width * g.w[i]);
    }
  }
}

double viscosity_scale(const RadialOptions& opt) {
  return opt.heat_reference ? opt.params.nu : opt.params.nu + opt.params.nu_tilde();
}

double front_speed(const RadialOptions& opt) {
  return opt.heat_reference ? 0.0 : opt.params.wave_speed();
}

// Radius beyond which only the Coulomb tail of ∇∇η survives.
double outer_radius(const RadialOptions& opt, double t) {
  return front_speed(opt) * t + 10.0 * opt.data.sigma + 10.0 * std::sqrt(2.0 * viscosity_scale(opt) * t);
}

// Largest wavenumber where the k-integrand envelope is above k_tol of its peak.
double cutoff_wavenumber(const RadialOptions& opt, double t) {
  const double kdata = std::sqrt(2.0 * std::log(1.0 / opt.k_tol)) / opt.data.sigma * 1.1;
  const int samples = 4000;
  std::vector<double> env(samples + 1);
  double peak = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double k = kdata * i / samples;
    const auto s = radial_spectrum(opt, k, t);
    env[i] = (std::abs(s.phi_hat) + k * std::abs(s.chi_hat)) * k * k * (1.0 + k * k);
    peak = std::max(peak, env[i]);
  }
  if (peak == 0.0) return kdata / samples;
  int last = 1;
  for (int i = samples; i > 0; --i) {
    if (env[i] > opt.k_tol * peak) {
      last = std::min(samples, i + 1);
      break;
    }
  }
  return kdata * last / samples;
}

struct KNodes {
  std::vector<double> k, w, phi, chi;
};

KNodes k_nodes(const RadialOptions& opt, double t, double rmax, double refine) {
  const double kmax = cutoff_wavenumber(opt, t);
  const double h = std::min(kmax / 4.0, 2.0 * pi / std::max(rmax, 1.0)) / refine;
  Panels pk;
  append_panels(pk, gauss_legendre(opt.order), 0.0, kmax, h);
  KNodes n;
  const double c = 1.0 / (2.0 * pi * pi);
  for (std::size_t i = 0; i < pk.x.size(); ++i) {
    const double k = pk.x[i];
    const auto s = radial_spectrum(opt, k, t);
    n.k.push_back(k);
    n.w.push_back(c * pk.w[i] * k * k);
    n.phi.push_back(s.phi_hat);
    n.chi.push_back(s.chi_hat);
  }
  return n;
}

struct Point {
  double phi, dchi, eta_rr, eta_r_over_r;
  double magnitude() const {
    return std::sqrt(phi * phi + dchi * dchi + eta_rr * eta_rr + 2.0 * eta_r_over_r * eta_r_over_r);
  }
};

Point evaluate(const KNodes& n, double r, bool heat) {
  Point p{0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n.k.size(); ++i) {
    const double k = n.k[i];
    const auto b = spherical_bessel(k * r);
    p.phi += n.w[i] * n.phi[i] * b.j0;
    if (heat) continue;
    p.dchi -= n.w[i] * n.chi[i] * k * k * r * b.j1_over_x;
    p.eta_r_over_r -= n.w[i] * n.phi[i] * b.j1_over_x;
    p.eta_rr -= n.w[i] * n.phi[i] * b.j1_prime;
  }
  return p;
}

// Coulomb tail |∇∇η| ≈ √6 |M| / (4π r³) beyond the outer radius.
double tail_integral(const RadialOptions& opt, double R, double p) {
  if (opt.heat_reference || opt.data.mass == 0.0) return 0.0;
  const double c = std::sqrt(6.0) * std::abs(opt.data.mass) / (4.0 * pi);
  return 4.0 * pi * std::pow(c, p) * std::pow(R, 3.0 - 3.0 * p) / (3.0 * p - 3.0);
}

Panels r_nodes(const RadialOptions& opt, double t, double rmax) {
  const auto g = gauss_legendre(opt.order);
  const double s = opt.data.sigma;
  const double inner = std::min(rmax, 12.0 * s);
  Panels pr;
  append_panels(pr, g, 0.0, inner, 0.5 * s);
  append_panels(pr, g, inner, rmax, 0.5 * std::max(s, std::sqrt(viscosity_scale(opt) * t)));
  return pr;
}

void check_refinement(const RadialOptions& opt, const KNodes& base, double t, double rmax) {
  const KNodes fine = k_nodes(opt, t, rmax, 2.0);
  double scale = 0.0, diff = 0.0;
  for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double r = frac * rmax;
    const Point a = evaluate(base, r, opt.heat_reference);
    const Point b = evaluate(fine, r, opt.heat_reference);
    scale = std::max(scale, b.magnitude());
    diff = std::max({diff, std::abs(a.phi - b.phi), std::abs(a.dchi - b.dchi), std::abs(a.eta_rr - b.eta_rr),
                     std::abs(a.eta_r_over_r - b.eta_r_over_r)});
  }
  const Point origin = evaluate(fine, 0.0, opt.heat_reference);
  scale = std::max(scale, origin.magnitude());
  if (diff > opt.check_tol * scale) {
    std::ostringstream os;
    os << "radial quadrature unresolved at t=" << t << ": change " << diff << " under refinement (scale "
       << scale << ")";
    throw QuadratureError(os.str());
  }
}

}  // namespace

RadialProfiles radial_profiles(const RadialOptions& opt, double t, const std::vector<double>& r) {
  const double rmax = std::max(outer_radius(opt, t), r.empty() ? 0.0 : *std::max_element(r.begin(), r.end()));
  const KNodes n = k_nodes(opt, t, rmax, 1.0);
  RadialProfiles out;
  out.r = r;
  for (double x : r) {
    const Point p = evaluate(n, x, opt.heat_reference);
    out.phi.push_back(p.phi);
    out.dchi.push_back(p.dchi);
    out.eta_rr.push_back(p.eta_rr);
    out.eta_r_over_r.push_back(p.eta_r_over_r);
  }
  return out;
}

double radial_lp_norm(const RadialOptions& opt, double t, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("L^p norm requires p > 1");
  const double rmax = outer_radius(opt, t);
  const KNodes n = k_nodes(opt, t, rmax, 1.0);
  const Panels pr = r_nodes(opt, t, rmax);

  if (std::isinf(p)) {
    std::size_t best = 0;
    double top = -1.0;
    std::vector<double> mag(pr.x.size());
    for (std::size_t i = 0; i < pr.x.size(); ++i) {
      mag[i] = evaluate(n, pr.x[i], opt.heat_reference).magnitude();
      if (mag[i] > top) {
        top = mag[i];
        best = i;
      }
    }
    const double origin = evaluate(n, 0.0, opt.heat_reference).magnitude();
    if (origin >= top) return origin;
    // golden-section refinement between the neighbours of the best node
    double a = best > 0 ? pr.x[best - 1] : 0.0;
    double b = best + 1 < pr.x.size() ? pr.x[best + 1] : rmax;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = evaluate(n, c, opt.heat_reference).magnitude();
    double fd = evaluate(n, d, opt.heat_reference).magnitude();
    for (int it = 0; it < 60 && b - a > 1e-12 * (1.0 + b); ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = evaluate(n, c, opt.heat_reference).magnitude();
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = evaluate(n, d, opt.heat_reference).magnitude();
      }
    }
    return std::max({top, fc, fd});
  }

  double sum = 0.0;
  for (std::size_t i = 0; i < pr.x.size(); ++i) {
    const double m = evaluate(n, pr.x[i], opt.heat_reference).magnitude();
    sum += pr.w[i] * std::pow(m, p) * pr.x[i] * pr.x[i];
  }
  sum = 4.0 * pi * sum + tail_integral(opt, rmax, p);
  return std::pow(sum, 1.0 / p);
}

double radial_plancherel_l2(const RadialOptions& opt, double t) {
  const double kmax = cutoff_wavenumber(opt, t);
  Panels pk;
  append_panels(pk, gauss_legendre(opt.order), 0.0, kmax, kmax / 64.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < pk.x.size(); ++i) {
    const double k = pk.x[i];
    const auto s = radial_spectrum(opt, k, t);
    const double phi2 = s.phi_hat * s.phi_hat;
    const double dens = opt.heat_reference ? phi2 : 2.0 * phi2 + k * k * s.chi_hat * s.chi_hat;
    sum += pk.w[i] * dens * k * k;
  }
  return std::sqrt(sum / (2.0 * pi * pi));
}

DecaySeries run_linear_radial(const RadialOptions& opt) {
  opt.params.validate(/*allow_zero_beta=*/true);
  if (!(opt.data.sigma > 0.0)) throw std::invalid_argument("radial data width must be positive");
  if (!std::is_sorted(opt.times.begin(), opt.times.end())) throw std::invalid_argument("times must be sorted");
  DecaySeries out;
  out.times = opt.times;
  for (double t : opt.times) {
    const double rmax = outer_radius(opt, t);
    check_refinement(opt, k_nodes(opt, t, rmax, 1.0), t, rmax);
    for (double p : opt.norms) out.norms[p].push_back(radial_lp_norm(opt, t, p));
  }
  return out;
}

}  // namespace visco
