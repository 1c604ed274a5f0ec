#include "visco/decay.hpp"

#include <cmath>
#include <stdexcept>

namespace visco {

double theoretical_rate(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("decay rates are defined for p > 1");
  if (std::isinf(p)) return 2.0;
  if (p >= 2.0) return 1.5 * (1.0 - 1.0 / p) + 0.5 * (1.0 - 2.0 / p);
  return 1.5 * (1.0 - 1.0 / p) - 0.5 * (2.0 / p - 1.0);
}

namespace {

FitResult fit_log(const std::vector<double>& times, const std::vector<double>& values, const FitWindow& window,
                  bool log_time) {
  if (times.size() != values.size()) throw std::invalid_argument("times and values differ in length");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < window.t0 || times[i] > window.t1) continue;
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw std::invalid_argument("decay fit needs positive finite values");
    }
    x.push_back(log_time ? std::log1p(times[i]) : times[i]);
    y.push_back(-std::log(values[i]));
  }
  const std::size_t n = x.size();
  if (n < 5) throw std::invalid_argument("decay fit needs at least 5 samples in the window");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 1e-14 * (1.0 + mx * mx))) throw std::invalid_argument("degenerate fit window");

  FitResult r;
  r.slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - my - r.slope * (x[i] - mx);
    rss += e * e;
  }
  r.std_error = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  r.window = window;
  r.points = static_cast<int>(n);
  return r;
}

}  // namespace

FitResult fit_decay_exponent(const std::vector<double>& times, const std::vector<double>& values,
                             const FitWindow& window) {
  return fit_log(times, values, window, true);
}

FitResult fit_exponential_rate(const std::vector<double>& times, const std::vector<double>& values,
                               const FitWindow& window) {
  return fit_log(times, values, window, false);
}

void DecaySeries::fit_all(const FitWindow& window) {
  fits.clear();
  for (const auto& [p, v] : norms) fits[p] = fit_decay_exponent(times, v, window);
}

}  // namespace visco
