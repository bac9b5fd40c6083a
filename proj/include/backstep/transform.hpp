#pragma once

#include "backstep/cauchy.hpp"
#include "backstep/spectrum.hpp"
#include "backstep/types.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace backstep {

// Rate c in the vanishing-gain alarm |k_n| >= 0.5 lambda exp(-c lambda^(1/alpha)) dist.
// Measured infima of |F_n| sit near exp(-0.7 lambda^(1/alpha)) on the power laws.
inline constexpr double kDefaultFloorRate = 2.0;

struct SynthesisOptions {
    double floor_rate = kDefaultFloorRate;
    bool check_floor = true;
    bool compute_norms = true;
};

struct GainResult {
    std::vector<Complex> k;   // k_n
    std::vector<Complex> kb;  // k_n b_n
    // Floating-point error bar on kb, always present.
    std::vector<double> rounding_bar;
    // Distance to the untruncated value, present once the truncation clears
    // the tail threshold.
    std::optional<std::vector<double>> tail_bar;

    double bar(int n) const { return rounding_bar[n] + (tail_bar ? (*tail_bar)[n] : 0.0); }
};

// k_n b_n as the n-th row sum of the explicit inverse.
GainResult feedback_gains_rowsum(const SpectrumModel& model, double lambda, int N, const SynthesisOptions& opt = {});
// Row-sum gains of an assembled synthesis, from its stored explicit inverse.
struct BacksteppingSynthesis;
GainResult rowsum_gains(const BacksteppingSynthesis& syn);
// k_n b_n = -lambda F_n with F_n the row Lagrange product.
GainResult feedback_gains_product(const SpectrumModel& model, double lambda, int N, const SynthesisOptions& opt = {});

// Truncated transformation. Matrices act on coordinate columns:
//   T(p, n) = <T phi_n, phi_p> = k_n b_p / (lambda_p - lambda_n - lambda)
//   checkT(i, j) = 1 / (lambda_i - lambda_j - lambda)
// so T = diag(b) checkT diag(k) and Tinv = diag(1/k) checkTinv diag(1/b).
struct BacksteppingSynthesis {
    std::shared_ptr<const SpectrumModel> model;
    double lambda = 0.0;
    int N = 0;
    DistCertificate cert;

    std::vector<Complex> eigen;  // lambda_1..lambda_N
    std::vector<double> b;
    std::vector<Complex> k;
    std::vector<Complex> kb;
    GainResult gains;

    CMatrix T, Tinv, checkT, checkTinv;
    std::vector<double> tb_residuals;

    std::optional<double> norm_T;
    std::optional<double> norm_Tinv;

    double tb_residual_max() const;
};

double tb_residual(const BacksteppingSynthesis& syn, int j);

BacksteppingSynthesis assemble(const SpectrumModel& model, double lambda, int N, const SynthesisOptions& opt = {});

struct ChiFunction {
    int n = 0;
    std::vector<Complex> coeffs;  // coeffs[p-1] = b_p / (lambda_p - lambda_n + lambda)
};

ChiFunction chi(const SpectrumModel& model, double lambda, int n, int N);

struct ClosedLoopCheck {
    Complex k_on_chi;
    double collinearity_defect = 0.0;
    double eigen_defect = 0.0;
};

ClosedLoopCheck verify_closed_loop_eigen(const BacksteppingSynthesis& syn, int n);

struct IdentityResidual {
    double absolute = 0.0;
    double relative = 0.0;  // absolute / (max|T| (max|lambda_n| + lambda) + max|b| max|k|)
};

// || T (A + B k^T) - (A - lambda I) T ||_max
IdentityResidual operator_identity_residual(const BacksteppingSynthesis& syn);

// A + B k^T on the truncated coordinates.
CMatrix closed_loop_matrix(const BacksteppingSynthesis& syn);

}  // namespace backstep
