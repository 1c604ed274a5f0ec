#pragma once

#include <map>
#include <vector>

namespace visco {

/// Decay exponent σ(p) of ‖u(t)‖_{L^p} ~ (1+t)^{−σ(p)}:
///   p ≥ 2:      3/2(1 − 1/p) + 1/2(1 − 2/p)
///   1 < p < 2:  3/2(1 − 1/p) − 1/2(2/p − 1)
/// Throws std::invalid_argument for p ≤ 1.
double theoretical_rate(double p);

struct FitWindow {
  double t0 = 0.0;
  double t1 = 0.0;
};

struct FitResult {
  double slope = 0.0;   // positive for decay
  double std_error = 0.0;
  FitWindow window;
  int points = 0;
};

/// Least squares of −log‖·‖ against log(1+t) over samples with t in [t0, t1].
/// Throws std::invalid_argument for fewer than 5 samples, non-positive values or a
/// window whose abscissae coincide.
FitResult fit_decay_exponent(const std::vector<double>& times, const std::vector<double>& values,
                             const FitWindow& window);

/// Least squares of −log‖·‖ against t: the exponential decay rate on the window.
FitResult fit_exponential_rate(const std::vector<double>& times, const std::vector<double>& values,
                               const FitWindow& window);

struct DecaySeries {
  std::vector<double> times;
  std::map<double, std::vector<double>> norms;  // p -> values at `times`
  std::map<double, FitResult> fits;

  /// Fits every stored norm over the window.
  void fit_all(const FitWindow& window);
};

}  // namespace visco
