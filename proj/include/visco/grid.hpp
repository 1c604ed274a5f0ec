#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace visco {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;

namespace detail {
struct FftPlans;
}

/// Periodic box [0, L)^3 sampled on n^3 points.
///
/// Physical samples are stored with the last axis fastest. Spectra use the
/// real-to-complex half layout n * n * (n/2 + 1); the lattice wavevector for
/// integer triple m is (2*pi/L) * m with every component in [-n/2, n/2).
/// The last axis only stores m3 in [0, n/2] (its negative half is implied by
/// Hermitian symmetry).
class SpectralGrid {
 public:
  SpectralGrid(int n, double length, bool dealias);

  int n() const { return n_; }
  double length() const { return length_; }
  bool dealias() const { return dealias_; }

  /// Lattice spacing 2*pi/L.
  double dk() const { return dk_; }
  int half() const { return n_ / 2 + 1; }
  std::size_t physical_size() const { return physical_size_; }
  std::size_t spectral_size() const { return spectral_size_; }
  double volume() const { return length_ * length_ * length_; }
  double cell_volume() const { return volume() / static_cast<double>(physical_size_); }
  double spacing() const { return length_ / n_; }

  /// Signed lattice integer for a storage index along the first two axes.
  int signed_index(int i) const { return i < n_ / 2 ? i : i - n_; }

  /// Sorted per-axis wavenumbers (2*pi/L) * m, m = -n/2 .. n/2-1.
  std::vector<double> axis_wavenumbers() const;

  /// Integer lattice triple of a half-spectrum storage index.
  std::array<int, 3> lattice(std::size_t spectral_index) const;
  Vec3 wavevector(std::size_t spectral_index) const;

  /// True when any lattice component sits on the Nyquist index -n/2.
  bool on_nyquist(std::size_t spectral_index) const;

  /// True when the mode survives two-thirds truncation (|m_j| < n/3 for all j).
  bool inside_two_thirds(std::size_t spectral_index) const;

  /// Weight of a half-spectrum mode in a full-spectrum sum (1 or 2).
  double hermitian_weight(std::size_t spectral_index) const;

  /// Physical coordinate of sample (i, j, l).
  Vec3 position(int i, int j, int l) const {
    const double h = spacing();
    return {h * i, h * j, h * l};
  }

  /// Unnormalized forward transform of one component (n^3 reals -> half spectrum).
  void forward(const double* in, Complex* out) const;
  /// Inverse transform including the 1/n^3 factor. `in` is not modified.
  void inverse(const Complex* in, double* out) const;

  bool same_as(const SpectralGrid& other) const {
    return n_ == other.n_ && length_ == other.length_ && dealias_ == other.dealias_;
  }

 private:
  int n_;
  double length_;
  bool dealias_;
  double dk_;
  std::size_t physical_size_;
  std::size_t spectral_size_;
  std::shared_ptr<detail::FftPlans> plans_;
};

/// Validating factory. Throws std::invalid_argument for odd n, n < 8 or L <= 0.
SpectralGrid make_grid(int n, double length, bool dealias = true);

/// Number of threads used by subsequently created FFT plans.
void set_fft_threads(int threads);

}  // namespace visco
