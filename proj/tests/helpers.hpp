#pragma once

#include <cmath>
#include <random>

#include "visco/field.hpp"
#include "visco/spectral.hpp"

namespace testing_helpers {

// Real random field without Nyquist content, decaying spectrum.
inline visco::Field random_field(const visco::SpectralGrid& g, visco::Rank r, unsigned seed, double decay = 0.3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  visco::Field f(g, r);
  for (auto& v : f.raw()) v = nd(rng);
  visco::Spectrum s = visco::forward(f);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto xi = g.wavevector(i);
    const double k = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) / g.dk();
    for (int c = 0; c < s.ncomp(); ++c) s(c, i) *= std::exp(-decay * k * k);
  }
  visco::zero_nyquist(s);
  return visco::inverse(s);
}

inline double max_diff(const visco::Field& a, const visco::Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.raw().size(); ++i) m = std::max(m, std::abs(a.raw()[i] - b.raw()[i]));
  return m;
}

inline double max_diff(const visco::Spectrum& a, const visco::Spectrum& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.raw().size(); ++i) m = std::max(m, std::abs(a.raw()[i] - b.raw()[i]));
  return m;
}

}  // namespace testing_helpers
