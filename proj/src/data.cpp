#include "visco/data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "visco/spectral.hpp"

namespace visco {

namespace {

// exp(-d²/2σ²) summed over the nearest periodic images of the box centre.
double periodic_gaussian(double x, double centre, double length, double sigma) {
  double s = 0.0;
  for (int n = -2; n <= 2; ++n) {
    const double d = x - centre + n * length;
    s += std::exp(-0.5 * d * d / (sigma * sigma));
  }
  return s;
}

double max_grad_norm(const Spectrum& psi) {
  const Field A = inverse(gradient(psi));
  double m = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    double a = 0.0;
    for (int c = 0; c < 9; ++c) a += A(c, i) * A(c, i);
    m = std::max(m, a);
  }
  return std::sqrt(m);
}

void filter(Spectrum& s) { truncate_two_thirds(s); }

Field filtered(const Field& f) {
  Spectrum s = forward(f);
  filter(s);
  return inverse(s);
}

}  // namespace

DataMode parse_data_mode(const std::string& s) {
  if (s == "rank_one_shear") return DataMode::rank_one_shear;
  if (s == "radial_potential") return DataMode::radial_potential;
  if (s == "random_smooth") return DataMode::random_smooth;
  throw std::invalid_argument("unknown data mode '" + s + "'");
}

std::string to_string(DataMode m) {
  switch (m) {
    case DataMode::rank_one_shear: return "rank_one_shear";
    case DataMode::radial_potential: return "radial_potential";
    case DataMode::random_smooth: return "random_smooth";
  }
  return "unknown";
}

double support_radius_limit(const SpectralGrid& g) { return 0.5 * g.length(); }

InitialData make_initial_data(const SpectralGrid& g, const DataSpec& spec) {
  if (!(spec.amplitude >= 0.0) || spec.amplitude >= 0.5) throw std::invalid_argument("amplitude must lie in [0, 0.5)");
  if (!(spec.radius > 0.0) || spec.radius > support_radius_limit(g)) {
    throw std::invalid_argument("support radius must lie in (0, L/2]");
  }
  const double sigma = spec.radius / 5.0;
  const double c = 0.5 * g.length();
  const int n = g.n();
  const std::size_t np = g.physical_size();

  Field psi(g, Rank::vector);
  Field v(g, Rank::vector);

  auto for_each_point = [&](auto&& fn) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) fn((static_cast<std::size_t>(i) * n + j) * n + l, g.position(i, j, l));
  };

  switch (spec.mode) {
    case DataMode::rank_one_shear: {
      // ψ̃ = e₂ g(x₁): ∇ψ̃ = e₂ ⊗ e₁ g′ is rank one and trace free, so det(I − ∇ψ̃) = 1
      for_each_point([&](std::size_t i, const Vec3& x) {
        psi(1, i) = periodic_gaussian(x[0], c, g.length(), sigma);
        v(1, i) = psi(1, i);
      });
      break;
    }
    case DataMode::radial_potential: {
      Field eta(g, Rank::scalar);
      for_each_point([&](std::size_t i, const Vec3& x) {
        eta(0, i) = periodic_gaussian(x[0], c, g.length(), sigma) * periodic_gaussian(x[1], c, g.length(), sigma) *
                    periodic_gaussian(x[2], c, g.length(), sigma);
      });
      const Spectrum es = forward(eta);
      psi = inverse(gradient(es));
      v = psi;
      break;
    }
    case DataMode::random_smooth: {
      std::mt19937_64 rng(spec.seed);
      std::normal_distribution<double> nd;
      // a few random plane waves with wavelengths comparable to the envelope width
      struct Wave {
        Vec3 k;
        double phase;
        Vec3 amp, vamp;
      };
      std::vector<Wave> waves(6);
      for (auto& w : waves) {
        for (int d = 0; d < 3; ++d) {
          w.k[d] = nd(rng) / sigma;
          w.amp[d] = nd(rng);
          w.vamp[d] = nd(rng);
        }
        w.phase = 2.0 * std::numbers::pi * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      }
      for_each_point([&](std::size_t i, const Vec3& x) {
        const double env = periodic_gaussian(x[0], c, g.length(), sigma) *
                           periodic_gaussian(x[1], c, g.length(), sigma) *
                           periodic_gaussian(x[2], c, g.length(), sigma);
        for (const auto& w : waves) {
          const double arg = w.k[0] * (x[0] - c) + w.k[1] * (x[1] - c) + w.k[2] * (x[2] - c) + w.phase;
          const double s = std::cos(arg);
          for (int d = 0; d < 3; ++d) {
            psi(d, i) += env * w.amp[d] * s;
            v(d, i) += env * w.vamp[d] * s;
          }
        }
      });
      break;
    }
  }

  Spectrum ps = forward(psi);
  filter(ps);
  const double gmax = max_grad_norm(ps);
  ps *= gmax > 0.0 ? spec.amplitude / gmax : 0.0;

  Field vf = filtered(v);
  double vmax = 0.0;
  for (std::size_t i = 0; i < np; ++i) {
    vmax = std::max(vmax, std::sqrt(vf(0, i) * vf(0, i) + vf(1, i) * vf(1, i) + vf(2, i) * vf(2, i)));
  }
  vf *= (vmax > 0.0 && spec.velocity != 0.0) ? spec.velocity * spec.amplitude / vmax : 0.0;
  return {std::move(ps), std::move(vf)};
}

PrimitiveState make_primitive(const SpectralGrid& g, const DataSpec& spec) {
  InitialData d = make_initial_data(g, spec);
  return primitive_from_displacement(d.psi_tilde, d.v);
}

StateU random_linear_state(const SpectralGrid& g, double amplitude, std::uint64_t seed, double decay) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  auto smooth = [&](Rank r) {
    Field f(g, r);
    for (auto& v : f.raw()) v = nd(rng);
    Spectrum s = forward(f);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto m = g.lattice(i);
      const double m2 = static_cast<double>(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
      for (int c = 0; c < s.ncomp(); ++c) s(c, i) *= std::exp(-decay * m2);
    }
    zero_nyquist(s);
    for (int c = 0; c < s.ncomp(); ++c) s(c, 0) = 0.0;
    return s;
  };
  const Spectrum psi = smooth(Rank::vector);
  StateU u(g);
  u.w = smooth(Rank::vector);
  u.Psi = gradient(psi);
  u.phi = divergence(psi);
  u.phi *= -1.0;
  const auto f = to_physical(u);
  const double scale = std::max({max_abs(f.phi), max_abs(f.w), max_abs(f.Psi)});
  if (scale > 0.0) u *= amplitude / scale;
  return u;
}

}  // namespace visco
