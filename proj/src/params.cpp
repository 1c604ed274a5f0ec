#include "visco/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace visco {

double ModelParams::m1() const {
  const double shear = beta / nu;
  const double comp = std::sqrt(beta * beta + gamma * gamma) / (nu + nu_tilde());
  return std::min(shear, comp);
}

double ModelParams::wave_speed() const { return std::sqrt(beta * beta + gamma * gamma); }

void ModelParams::validate(bool allow_zero_beta) const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(nu) || !finite(nu_prime) || !finite(beta) || !finite(gamma) || !finite(kappa)) {
    throw std::invalid_argument("model parameters must be finite");
  }
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  if (2.0 * nu + 3.0 * nu_prime < 0.0) throw std::invalid_argument("need 2 nu + 3 nu' >= 0");
  if (allow_zero_beta ? beta < 0.0 : !(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
}

std::string ModelParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "nu=" << nu << " nu_prime=" << nu_prime << " beta=" << beta << " gamma=" << gamma << " kappa=" << kappa;
  return os.str();
}

}  // namespace visco
