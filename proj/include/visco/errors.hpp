#pragma once

#include <stdexcept>
#include <string>

namespace visco {

/// A numerical procedure produced non-finite values or lost its error control.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A fixed-point iteration failed to contract or hit its iteration cap.
struct DivergedError : NumericalError {
  DivergedError(const std::string& what, double ratio_) : NumericalError(what), ratio(ratio_) {}
  double ratio;
};

/// State left the smallness regime the reformulation requires.
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Radial quadrature did not resolve the oscillatory integrand.
struct QuadratureError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace visco
