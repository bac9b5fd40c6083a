#pragma once

#include "backstep/linalg.hpp"
#include "backstep/log_product.hpp"
#include "backstep/spectrum.hpp"
#include "backstep/transform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace backstep {

struct FValue {
    LogSignedProduct value;          // prod_{m!=n, m<=N} (1 + lambda/(lambda_n - lambda_m))
    std::optional<double> tail_bar;  // bound on the log-distance to the infinite product
};

// lambda = 0 is allowed and gives 1.
FValue eval_F(const SpectrumModel& model, int n, double lambda, int N);

// Truncated telescoping sum
//   sum_j prod_{m!=n}(z_j - z_m - lambda) / prod_{m!=j}(z_j - z_m),  z = lambda_1..lambda_N,
// accumulated in long double with compensation, nearest |j - n| first.
Complex eval_J(const SpectrumModel& model, int n, double lambda, int N);

struct ProductBoundReport {
    std::vector<double> lambdas;
    std::vector<double> sup_log;  // sup_i log|prod_{m!=i}(1 + lambda/(lambda_i - lambda_m))|
    std::optional<LinearFit> fit;  // sup_log ~ a + b lambda^(1/alpha)
    bool pass = false;
    std::string note;
};

ProductBoundReport bound_check_products(const SpectrumModel& model, const std::vector<double>& lambda_grid, int N);

inline constexpr double kDefaultSumRatioCap = 4.0;

struct SumBoundReport {
    double lambda = 0.0;
    double dist = 0.0;
    double row_max = 0.0;  // max_i sum_j lambda^2 / |lambda_j - lambda_i - lambda|
    double col_max = 0.0;  // same with the roles of i and j swapped
    double reference = 0.0;  // lambda^2 + lambda^2 / dist
    double ratio = 0.0;
    bool pass = false;
};

SumBoundReport bound_check_sums(const SpectrumModel& model, double lambda, int N,
                                double ratio_cap = kDefaultSumRatioCap);

// Default probe depth min(2 ceil(lambda^(1/alpha)) + 10, N).
int default_probe_depth(const SpectrumModel& model, double lambda, int N);

struct FLowerBoundReport {
    std::vector<double> mus;
    std::vector<double> min_log_ratio;  // min over probed n of log|F_n| - log dist
    double rate = 0.0;    // c in  log|F_n|/dist >= -c mu^(1/alpha) - C
    double offset = 0.0;  // C
    bool modulus_at_least_one = true;  // |F_n| >= 1 everywhere (expected for skew-adjoint models)
    bool pass = false;
};

FLowerBoundReport lower_bound_check_F(const SpectrumModel& model, const std::vector<double>& mu_sequence, int N);

struct WeightedNorm {
    double s = 0.0;
    double norm_T = 0.0;
    double norm_Tinv = 0.0;
};

struct CostReport {
    int N = 0;
    double lambda = 0.0;
    double dist = 0.0;
    int M = 0;
    double offset = 0.0;  // lambda - N
    bool flagged = false;
    std::string flag_reason;

    double norm_T = 0.0;
    double norm_Tinv = 0.0;
    std::vector<WeightedNorm> weighted;
    double k_sup = 0.0;
    double k_inf = 0.0;
    double kb_inf = 0.0;
    double F_sup = 0.0;
    double F_inf = 0.0;
    // max_n |rowsum - product| / (combined bar); <= 1 means the routes agree
    double gain_gap = 0.0;
    bool tail_bars = false;
    double tb_residual_max = 0.0;
    double fitted_exponent = 0.0;
};

struct SweepOptions {
    std::vector<double> s_values{0.25, 0.45};
    SynthesisOptions synthesis;
    bool parallel = true;
};

struct CostSweep {
    std::vector<CostReport> rows;
    std::optional<LinearFit> fit;  // log(norm_T + norm_Tinv) ~ a + b lambda^(1/alpha)
};

// One point per N: select_mu(N) for self-adjoint models, lambda = N for skew-adjoint ones.
CostSweep cost_sweep(const SpectrumModel& model, const std::vector<int>& N_range, int trunc,
                     const SweepOptions& opt = {});

// Same report on explicit damping values; N is recorded as floor(lambda).
CostSweep cost_sweep_lambdas(const SpectrumModel& model, const std::vector<double>& lambdas, int trunc,
                             const SweepOptions& opt = {});

}  // namespace backstep
