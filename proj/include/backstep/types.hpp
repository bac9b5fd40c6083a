#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace backstep {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

}  // namespace backstep
