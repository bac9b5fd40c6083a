#pragma once

// Extended-precision twin of the synthesis, used where the transformation is
// too ill-conditioned for double (condition numbers past 1e40 at the damping
// values reached by a null-control schedule).

#include "backstep/spectrum.hpp"
#include "backstep/types.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <vector>

namespace backstep {

using WideReal = boost::multiprecision::cpp_bin_float_100;
using WideComplex = boost::multiprecision::cpp_complex_100;
using WideMatrix = Eigen::Matrix<WideComplex, Eigen::Dynamic, Eigen::Dynamic>;
using WideVector = Eigen::Matrix<WideComplex, Eigen::Dynamic, 1>;

struct WideSynthesis {
    double lambda = 0.0;
    int N = 0;
    std::vector<WideComplex> eigen;
    std::vector<WideReal> b;
    std::vector<WideComplex> k;
    WideMatrix T;     // same orientation as BacksteppingSynthesis::T
    WideMatrix Tinv;
    double norm_T = 0.0;     // largest singular values, computed in double
    double norm_Tinv = 0.0;
};

WideSynthesis assemble_wide(const SpectrumModel& model, double lambda, int N);

// Tinv diag(exp((lambda_n - lambda) t)) T y0
WideVector propagate_wide(const WideSynthesis& syn, const WideVector& y0, double t);

// Same, with T y0 already applied.
WideVector propagate_from_target(const WideSynthesis& syn, const WideVector& target, double t);

WideComplex control_wide(const WideSynthesis& syn, const WideVector& y);

CMatrix to_double(const WideMatrix& m);
CVector to_double(const WideVector& v);
WideVector to_wide(const CVector& v);
Complex to_double(const WideComplex& z);

}  // namespace backstep
