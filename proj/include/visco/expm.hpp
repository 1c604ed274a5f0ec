#pragma once

#include <Eigen/Dense>

namespace visco {

/// Matrix exponential by scaling and squaring around a degree-13 Taylor
/// polynomial; the scaled matrix has 1-norm at most 1/2.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

}  // namespace visco
