#pragma once

// Data-parallel kernels. Each one exists twice: an OpenMP version used by the
// library and a plain serial version kept as the reference. Both produce
// bitwise identical results because every output slot is written by exactly
// one iteration and no reductions cross threads.

#include "backstep/cauchy.hpp"
#include "backstep/spectrum.hpp"
#include "backstep/types.hpp"

#include <vector>

namespace backstep::kernels {

namespace serial {
CMatrix cauchy_matrix(const CauchySystem& sys);
LagrangeProducts lagrange_products(const CauchySystem& sys);
CMatrix explicit_inverse(const CauchySystem& sys, const LagrangeProducts& p);
std::vector<DistCertificate> dist_scan(const SpectrumModel& model, const std::vector<double>& lambdas);
}  // namespace serial

namespace parallel {
CMatrix cauchy_matrix(const CauchySystem& sys);
LagrangeProducts lagrange_products(const CauchySystem& sys);
CMatrix explicit_inverse(const CauchySystem& sys, const LagrangeProducts& p);
std::vector<DistCertificate> dist_scan(const SpectrumModel& model, const std::vector<double>& lambdas);
}  // namespace parallel

}  // namespace backstep::kernels
