#include "visco/expm.hpp"

#include <cmath>
#include <stdexcept>

namespace visco {

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm needs a square matrix");
  if (!a.allFinite()) throw std::domain_error("expm of a non-finite matrix");
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXcd b = a / std::ldexp(1.0, squarings);

  const Eigen::Index n = a.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd r = id;
  for (int j = 13; j >= 1; --j) r = id + (b * r) / static_cast<double>(j);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

}  // namespace visco
