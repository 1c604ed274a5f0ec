#include "visco/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace visco {

namespace {

constexpr Complex I{0.0, 1.0};

double norm2(const Vec3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

Rank rank_from_rows(Eigen::Index rows) {
  switch (rows) {
    case 1: return Rank::scalar;
    case 3: return Rank::vector;
    case 9: return Rank::tensor;
    default: throw std::invalid_argument("symbol row count must be 1, 3 or 9");
  }
}

// Wavevector of the Hermitian partner with Nyquist components reflected.
Vec3 nyquist_mirror(const SpectralGrid& g, std::size_t s) {
  auto m = g.lattice(s);
  Vec3 xi;
  for (int d = 0; d < 3; ++d) {
    const int md = (m[d] == -g.n() / 2) ? g.n() / 2 : m[d];
    xi[d] = g.dk() * md;
  }
  return xi;
}

double smooth_step_f(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

Spectrum apply_multiplier(const Spectrum& f, const Symbol& symbol,
                          const std::optional<Eigen::MatrixXcd>& zero_mode) {
  const auto& g = f.grid();
  const int nin = f.ncomp();
  std::optional<Spectrum> out;
  Eigen::VectorXcd u(nin);

  auto eval = [&](std::size_t s) -> Eigen::MatrixXcd {
    if (s == 0 && zero_mode) return *zero_mode;
    const Vec3 xi = g.wavevector(s);
    Eigen::MatrixXcd m = symbol(xi);
    if (g.on_nyquist(s)) m = 0.5 * (m + symbol(nyquist_mirror(g, s)));
    if (!m.allFinite()) {
      throw std::domain_error("multiplier symbol is not finite at a lattice point");
    }
    return m;
  };

  for (std::size_t s = 0; s < f.size(); ++s) {
    const Eigen::MatrixXcd m = eval(s);
    if (m.cols() != nin) throw std::invalid_argument("symbol column count does not match field rank");
    if (!out) out.emplace(g, rank_from_rows(m.rows()));
    if (m.rows() != out->ncomp()) throw std::invalid_argument("symbol shape changes across the lattice");
    for (int c = 0; c < nin; ++c) u(c) = f(c, s);
    const Eigen::VectorXcd r = m * u;
    for (int c = 0; c < out->ncomp(); ++c) (*out)(c, s) = r(c);
  }
  return std::move(*out);
}

Field apply_multiplier(const Field& f, const Symbol& symbol, const std::optional<Eigen::MatrixXcd>& zero_mode) {
  return inverse(apply_multiplier(forward(f), symbol, zero_mode));
}

double CutoffSpec::low(double k) const {
  const double a = 0.5 * m1;
  const double b = m1 / std::numbers::sqrt2;
  if (k <= a) return 1.0;
  if (k >= b) return 0.0;
  const double s = (k - a) / (b - a);
  const double p = smooth_step_f(1.0 - s);
  const double q = smooth_step_f(s);
  return p / (p + q);
}

std::pair<Spectrum, Spectrum> frequency_split(const Spectrum& f, const CutoffSpec& c) {
  const auto& g = f.grid();
  if (!(c.m1 > 4.0 * std::numbers::pi / g.length())) {
    throw std::invalid_argument("cutoff scale m1 is not resolved by the box (need m1 > 4π/L)");
  }
  Spectrum low = f;
  Spectrum high = f;
  for (std::size_t s = 0; s < f.size(); ++s) {
    const double w = c.low(std::sqrt(norm2(g.wavevector(s))));
    for (int k = 0; k < f.ncomp(); ++k) {
      low(k, s) = w * f(k, s);
      high(k, s) = f(k, s) - low(k, s);
    }
  }
  return {std::move(low), std::move(high)};
}

std::pair<Field, Field> frequency_split(const Field& f, const CutoffSpec& c) {
  auto [lo, hi] = frequency_split(forward(f), c);
  Field flo = inverse(lo);
  // P∞ f = f - P1 f keeps the partition exact in physical space as well.
  Field fhi = f;
  fhi -= flo;
  return {std::move(flo), std::move(fhi)};
}

Spectrum gradient(const Spectrum& f) {
  const auto& g = f.grid();
  if (f.rank() == Rank::tensor) throw std::invalid_argument("gradient of a tensor is not supported");
  const int nin = f.ncomp();
  Spectrum out(g, f.rank() == Rank::scalar ? Rank::vector : Rank::tensor);
  for (std::size_t s = 0; s < f.size(); ++s) {
    Vec3 xi = g.wavevector(s);
    auto m = g.lattice(s);
    for (int d = 0; d < 3; ++d) {
      if (m[d] == -g.n() / 2) xi[d] = 0.0;  // odd symbol vanishes on Nyquist planes
    }
    for (int j = 0; j < nin; ++j) {
      for (int k = 0; k < 3; ++k) out(3 * j + k, s) = I * xi[k] * f(j, s);
    }
  }
  return out;
}

Spectrum divergence(const Spectrum& v) {
  if (v.rank() != Rank::vector) throw std::invalid_argument("divergence expects a vector");
  const auto& g = v.grid();
  Spectrum out(g, Rank::scalar);
  for (std::size_t s = 0; s < v.size(); ++s) {
    Vec3 xi = g.wavevector(s);
    auto m = g.lattice(s);
    for (int d = 0; d < 3; ++d) {
      if (m[d] == -g.n() / 2) xi[d] = 0.0;
    }
    out(0, s) = I * (xi[0] * v(0, s) + xi[1] * v(1, s) + xi[2] * v(2, s));
  }
  return out;
}

Spectrum row_divergence(const Spectrum& t) {
  if (t.rank() != Rank::tensor) throw std::invalid_argument("row divergence expects a tensor");
  const auto& g = t.grid();
  Spectrum out(g, Rank::vector);
  for (std::size_t s = 0; s < t.size(); ++s) {
    Vec3 xi = g.wavevector(s);
    auto m = g.lattice(s);
    for (int d = 0; d < 3; ++d) {
      if (m[d] == -g.n() / 2) xi[d] = 0.0;
    }
    for (int j = 0; j < 3; ++j) {
      out(j, s) = I * (xi[0] * t(tidx(j, 0), s) + xi[1] * t(tidx(j, 1), s) + xi[2] * t(tidx(j, 2), s));
    }
  }
  return out;
}

Spectrum transpose(const Spectrum& t) {
  if (t.rank() != Rank::tensor) throw std::invalid_argument("transpose expects a tensor");
  Spectrum out(t.grid(), Rank::tensor);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) std::copy(t.data(tidx(k, j)), t.data(tidx(k, j)) + t.size(), out.data(tidx(j, k)));
  }
  return out;
}

Spectrum trace(const Spectrum& t) {
  if (t.rank() != Rank::tensor) throw std::invalid_argument("trace expects a tensor");
  Spectrum out(t.grid(), Rank::scalar);
  for (std::size_t s = 0; s < t.size(); ++s) out(0, s) = t(0, s) + t(4, s) + t(8, s);
  return out;
}

Spectrum laplacian(const Spectrum& f) {
  const auto& g = f.grid();
  Spectrum out(g, f.rank());
  for (std::size_t s = 0; s < f.size(); ++s) {
    const double k2 = norm2(g.wavevector(s));
    for (int c = 0; c < f.ncomp(); ++c) out(c, s) = -k2 * f(c, s);
  }
  return out;
}

Spectrum inverse_laplacian(const Spectrum& f) {
  const auto& g = f.grid();
  Spectrum out(g, f.rank());
  for (std::size_t s = 1; s < f.size(); ++s) {
    const double k2 = norm2(g.wavevector(s));
    for (int c = 0; c < f.ncomp(); ++c) out(c, s) = f(c, s) / k2;
  }
  return out;
}

Field inverse_laplacian(const Field& f) { return inverse(inverse_laplacian(forward(f))); }

Spectrum leray_project(const Spectrum& w) {
  if (w.rank() != Rank::vector) throw std::invalid_argument("Leray projection expects a vector");
  const auto& g = w.grid();
  Spectrum out = w;
  for (std::size_t s = 1; s < w.size(); ++s) {
    const Vec3 xi = g.wavevector(s);
    const double k2 = norm2(xi);
    const Complex d = (xi[0] * w(0, s) + xi[1] * w(1, s) + xi[2] * w(2, s)) / k2;
    for (int j = 0; j < 3; ++j) out(j, s) = w(j, s) - xi[j] * d;
  }
  return out;
}

Field leray_project(const Field& w) { return inverse(leray_project(forward(w))); }

Spectrum invlap_div_transpose(const Spectrum& t) {
  if (t.rank() != Rank::tensor) throw std::invalid_argument("expected a tensor");
  const auto& g = t.grid();
  Spectrum out(g, Rank::vector);
  for (std::size_t s = 1; s < t.size(); ++s) {
    const Vec3 xi = g.wavevector(s);
    const double k2 = norm2(xi);
    for (int j = 0; j < 3; ++j) {
      const Complex c = xi[0] * t(tidx(0, j), s) + xi[1] * t(tidx(1, j), s) + xi[2] * t(tidx(2, j), s);
      out(j, s) = I * c / k2;
    }
  }
  return out;
}

Spectrum grad_invlap_div(const Spectrum& t) {
  if (t.rank() != Rank::tensor) throw std::invalid_argument("expected a tensor");
  const auto& g = t.grid();
  Spectrum out(g, Rank::tensor);
  for (std::size_t s = 1; s < t.size(); ++s) {
    const Vec3 xi = g.wavevector(s);
    const double k2 = norm2(xi);
    for (int j = 0; j < 3; ++j) {
      const Complex c = (xi[0] * t(tidx(0, j), s) + xi[1] * t(tidx(1, j), s) + xi[2] * t(tidx(2, j), s)) / k2;
      for (int l = 0; l < 3; ++l) out(tidx(j, l), s) = -xi[l] * c;
    }
  }
  return out;
}

Field grad_invlap_div(const Field& t) { return inverse(grad_invlap_div(forward(t))); }

double lp_norm(const Field& f, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("lp_norm requires p > 1");
  const std::size_t n = f.size();
  const int nc = f.ncomp();
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double a = 0.0;
      for (int c = 0; c < nc; ++c) a += f(c, i) * f(c, i);
      m = std::max(m, a);
    }
    return std::sqrt(m);
  }
  // scale by the maximum first so large p does not overflow
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = 0.0;
    for (int c = 0; c < nc; ++c) a += f(c, i) * f(c, i);
    scale = std::max(scale, a);
  }
  scale = std::sqrt(scale);
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = 0.0;
    for (int c = 0; c < nc; ++c) a += f(c, i) * f(c, i);
    sum += std::pow(std::sqrt(a) / scale, p);
  }
  return scale * std::pow(sum * f.grid().cell_volume(), 1.0 / p);
}

double sobolev_weight(const Vec3& xi, int m) {
  if (m < 0) throw std::invalid_argument("Sobolev order must be nonnegative");
  double w = 0.0;
  for (int a = 0; a <= m; ++a) {
    for (int b = 0; a + b <= m; ++b) {
      for (int c = 0; a + b + c <= m; ++c) {
        w += std::pow(xi[0] * xi[0], a) * std::pow(xi[1] * xi[1], b) * std::pow(xi[2] * xi[2], c);
      }
    }
  }
  return w;
}

double sobolev_norm(const Spectrum& f, int m) {
  const auto& g = f.grid();
  double sum = 0.0;
  for (std::size_t s = 0; s < f.size(); ++s) {
    const double w = g.hermitian_weight(s) * sobolev_weight(g.wavevector(s), m);
    for (int c = 0; c < f.ncomp(); ++c) sum += w * std::norm(f(c, s));
  }
  const double n = static_cast<double>(g.physical_size());
  return std::sqrt(sum * g.volume() / (n * n));
}

double sobolev_norm(const Field& f, int m) { return sobolev_norm(forward(f), m); }

double inner_product(const Spectrum& a, const Spectrum& b) {
  a.check_same(b);
  const auto& g = a.grid();
  double sum = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    const double w = g.hermitian_weight(s);
    for (int c = 0; c < a.ncomp(); ++c) sum += w * std::real(a(c, s) * std::conj(b(c, s)));
  }
  const double n = static_cast<double>(g.physical_size());
  return sum * g.volume() / (n * n);
}

}  // namespace visco
