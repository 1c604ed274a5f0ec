#include "visco/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace visco {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
int g_fft_threads = 1;
bool g_threads_initialized = false;
}  // namespace

namespace detail {

struct FftPlans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  std::size_t spectral_size = 0;

  FftPlans(int n, std::size_t physical, std::size_t spectral) : spectral_size(spectral) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (g_fft_threads > 1) fftw_plan_with_nthreads(g_fft_threads);
    double* rbuf = fftw_alloc_real(physical);
    fftw_complex* cbuf = fftw_alloc_complex(spectral);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c = fftw_plan_dft_r2c_3d(n, n, n, rbuf, cbuf, flags);
    c2r = fftw_plan_dft_c2r_3d(n, n, n, cbuf, rbuf, flags | FFTW_DESTROY_INPUT);
    fftw_free(rbuf);
    fftw_free(cbuf);
    if (!r2c || !c2r) throw std::runtime_error("FFTW planning failed");
  }
  ~FftPlans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
};

}  // namespace detail

void set_fft_threads(int threads) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  threads = std::max(1, threads);
  if (threads > 1 && !g_threads_initialized) {
    fftw_init_threads();
    g_threads_initialized = true;
  }
  g_fft_threads = g_threads_initialized ? threads : 1;
}

SpectralGrid::SpectralGrid(int n, double length, bool dealias)
    : n_(n), length_(length), dealias_(dealias) {
  if (n < 8 || n % 2 != 0) {
    throw std::invalid_argument("grid size must be even and >= 8, got " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("box length must be positive");
  }
  dk_ = 2.0 * std::numbers::pi / length_;
  const auto nn = static_cast<std::size_t>(n_);
  physical_size_ = nn * nn * nn;
  spectral_size_ = nn * nn * static_cast<std::size_t>(half());
  plans_ = std::make_shared<detail::FftPlans>(n_, physical_size_, spectral_size_);
}

SpectralGrid make_grid(int n, double length, bool dealias) { return SpectralGrid(n, length, dealias); }

std::vector<double> SpectralGrid::axis_wavenumbers() const {
  std::vector<double> k;
  k.reserve(static_cast<std::size_t>(n_));
  for (int m = -n_ / 2; m < n_ / 2; ++m) k.push_back(dk_ * m);
  return k;
}

std::array<int, 3> SpectralGrid::lattice(std::size_t s) const {
  const auto h = static_cast<std::size_t>(half());
  const auto nn = static_cast<std::size_t>(n_);
  const int l = static_cast<int>(s % h);
  const int j = static_cast<int>((s / h) % nn);
  const int i = static_cast<int>(s / (h * nn));
  // the last axis stores m3 = 0..n/2; n/2 is the Nyquist plane, reported as -n/2
  const int m3 = (l == n_ / 2) ? -n_ / 2 : l;
  return {signed_index(i), signed_index(j), m3};
}

Vec3 SpectralGrid::wavevector(std::size_t s) const {
  const auto m = lattice(s);
  return {dk_ * m[0], dk_ * m[1], dk_ * m[2]};
}

bool SpectralGrid::on_nyquist(std::size_t s) const {
  const auto m = lattice(s);
  const int nyq = -n_ / 2;
  return m[0] == nyq || m[1] == nyq || m[2] == nyq;
}

bool SpectralGrid::inside_two_thirds(std::size_t s) const {
  const auto m = lattice(s);
  const int cut = n_ / 3;
  return std::abs(m[0]) < cut && std::abs(m[1]) < cut && std::abs(m[2]) < cut;
}

double SpectralGrid::hermitian_weight(std::size_t s) const {
  const int l = static_cast<int>(s % static_cast<std::size_t>(half()));
  return (l == 0 || l == n_ / 2) ? 1.0 : 2.0;
}

void SpectralGrid::forward(const double* in, Complex* out) const {
  // FFTW's plan is declared on non-const input but r2c never writes to it.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void SpectralGrid::inverse(const Complex* in, double* out) const {
  thread_local std::vector<Complex> scratch;
  scratch.assign(in, in + spectral_size_);
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out);
  const double scale = 1.0 / static_cast<double>(physical_size_);
  for (std::size_t i = 0; i < physical_size_; ++i) out[i] *= scale;
}

}  // namespace visco
