#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "visco/grid.hpp"

namespace visco {

enum class Rank { scalar = 1, vector = 3, tensor = 9 };

constexpr int components(Rank r) { return static_cast<int>(r); }

/// Tensor component (j, k) in row-major flattening; (∇v)^{jk} = ∂_k v^j.
constexpr int tidx(int j, int k) { return 3 * j + k; }

/// Component-major storage of a multi-component quantity on a grid.
/// T = double holds physical samples, T = Complex holds half spectra.
template <class T>
class GridArray {
 public:
  GridArray(const SpectralGrid& grid, Rank rank)
      : grid_(grid), rank_(rank), stride_(stride_for(grid)),
        values_(stride_ * static_cast<std::size_t>(components(rank)), T{}) {}

  const SpectralGrid& grid() const { return grid_; }
  Rank rank() const { return rank_; }
  int ncomp() const { return components(rank_); }
  std::size_t size() const { return stride_; }

  T* data(int c = 0) { return values_.data() + stride_ * static_cast<std::size_t>(c); }
  const T* data(int c = 0) const { return values_.data() + stride_ * static_cast<std::size_t>(c); }
  T& operator()(int c, std::size_t i) { return values_[stride_ * static_cast<std::size_t>(c) + i]; }
  const T& operator()(int c, std::size_t i) const { return values_[stride_ * static_cast<std::size_t>(c) + i]; }

  std::vector<T>& raw() { return values_; }
  const std::vector<T>& raw() const { return values_; }

  void fill(T v) { std::fill(values_.begin(), values_.end(), v); }

  GridArray& operator+=(const GridArray& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  GridArray& operator-=(const GridArray& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  GridArray& operator*=(double s) {
    for (auto& v : values_) v *= s;
    return *this;
  }
  /// this += a * x
  void axpy(double a, const GridArray& x) {
    check_same(x);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * x.values_[i];
  }

  void check_same(const GridArray& o) const {
    if (o.rank_ != rank_ || !o.grid_.same_as(grid_)) {
      throw std::invalid_argument("grid arrays differ in grid or rank");
    }
  }

 private:
  static std::size_t stride_for(const SpectralGrid& g) {
    if constexpr (std::is_same_v<T, double>) {
      return g.physical_size();
    } else {
      return g.spectral_size();
    }
  }

  SpectralGrid grid_;
  Rank rank_;
  std::size_t stride_;
  std::vector<T> values_;
};

using Field = GridArray<double>;
using Spectrum = GridArray<Complex>;

inline GridArray<double> operator+(GridArray<double> a, const GridArray<double>& b) { return a += b; }
inline GridArray<double> operator-(GridArray<double> a, const GridArray<double>& b) { return a -= b; }
inline GridArray<Complex> operator+(GridArray<Complex> a, const GridArray<Complex>& b) { return a += b; }
inline GridArray<Complex> operator-(GridArray<Complex> a, const GridArray<Complex>& b) { return a -= b; }

Spectrum forward(const Field& f);
Field inverse(const Spectrum& s);

/// Copy a single component out as a scalar.
Field component(const Field& f, int c);
Spectrum component(const Spectrum& s, int c);

/// Zero every mode outside the two-thirds band and every Nyquist mode.
void truncate_two_thirds(Spectrum& s);
/// Zero the Nyquist planes only.
void zero_nyquist(Spectrum& s);

/// Largest absolute sample over all components.
double max_abs(const Field& f);
/// Largest absolute coefficient over all components.
double max_abs(const Spectrum& s);

}  // namespace visco
