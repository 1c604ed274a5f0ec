#include "visco/field.hpp"

#include <cmath>

namespace visco {

Spectrum forward(const Field& f) {
  Spectrum s(f.grid(), f.rank());
  for (int c = 0; c < f.ncomp(); ++c) f.grid().forward(f.data(c), s.data(c));
  return s;
}

Field inverse(const Spectrum& s) {
  Field f(s.grid(), s.rank());
  for (int c = 0; c < s.ncomp(); ++c) s.grid().inverse(s.data(c), f.data(c));
  return f;
}

Field component(const Field& f, int c) {
  Field out(f.grid(), Rank::scalar);
  std::copy(f.data(c), f.data(c) + f.size(), out.data());
  return out;
}

Spectrum component(const Spectrum& s, int c) {
  Spectrum out(s.grid(), Rank::scalar);
  std::copy(s.data(c), s.data(c) + s.size(), out.data());
  return out;
}

void truncate_two_thirds(Spectrum& s) {
  const auto& g = s.grid();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (g.inside_two_thirds(i) && !g.on_nyquist(i)) continue;
    for (int c = 0; c < s.ncomp(); ++c) s(c, i) = 0.0;
  }
}

void zero_nyquist(Spectrum& s) {
  const auto& g = s.grid();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!g.on_nyquist(i)) continue;
    for (int c = 0; c < s.ncomp(); ++c) s(c, i) = 0.0;
  }
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.raw()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const Spectrum& s) {
  double m = 0.0;
  for (const Complex& v : s.raw()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace visco
