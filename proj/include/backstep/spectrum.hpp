#pragma once

#include "backstep/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace backstep {

enum class Kind { SelfAdjoint, SkewAdjoint };

std::string to_string(Kind kind);
Kind kind_from_string(const std::string& s);

using BLaw = std::function<double(int)>;

// Diagonal spectral model: eigenvalues lambda_n and control coefficients b_n,
// indexed from 1. The first n_max entries are materialized.
class SpectrumModel {
public:
    // Power law lambda_n = -a n^alpha (or -i a n^alpha), see make_spectrum.
    static SpectrumModel power_law(Kind kind, double alpha, double scale, int n_max, const BLaw& b_law);

    // Arbitrary simple spectrum given by a table. Gap constants are estimated
    // from the table; verify_gaps tells whether they are usable.
    static SpectrumModel tabulated(Kind kind, double alpha, std::vector<Complex> eigenvalues,
                                   std::vector<double> b);

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double scale() const { return scale_; }
    int n_max() const { return static_cast<int>(eigenvalues_.size()); }
    bool is_power_law() const { return power_law_; }

    // n >= 1. Power laws extend past n_max; tables do not.
    Complex eigenvalue(int n) const;
    // |lambda_n|, increasing in n.
    double magnitude(int n) const;
    double b(int n) const;
    double b_lo() const { return b_lo_; }
    double b_hi() const { return b_hi_; }

    // Lower constant of |lambda_k - lambda_n| >= c k^(alpha-1) |k - n|, used by every certificate.
    double gap_c() const { return gap_c_; }
    // Upper constant of |lambda_{n+1} - lambda_n| <= C n^(alpha-1).
    double gap_C() const { return gap_C_; }

    const std::vector<Complex>& eigenvalues() const { return eigenvalues_; }
    const std::vector<double>& b_values() const { return b_; }

    // First n eigenvalues / coefficients, n <= n_max.
    std::vector<Complex> eigenvalues(int n) const;
    std::vector<double> b_values(int n) const;

private:
    SpectrumModel() = default;
    void finish_bounds();

    Kind kind_ = Kind::SelfAdjoint;
    double alpha_ = 2.0;
    double scale_ = 1.0;
    bool power_law_ = false;
    std::vector<Complex> eigenvalues_;
    std::vector<double> b_;
    double b_lo_ = 1.0;
    double b_hi_ = 1.0;
    double gap_c_ = 0.0;
    double gap_C_ = 0.0;
};

// b_law defaults to b_n = 1.
SpectrumModel make_spectrum(Kind kind, double alpha, double scale, int n_max, const BLaw& b_law = {});

struct GapCondition {
    std::string name;
    double constant = 0.0;  // best constant over the scanned range
    int worst_i = 0;
    int worst_j = 0;
    bool pass = false;
};

struct GapReport {
    int n_check = 0;
    bool ordered = false;         // strictly increasing |lambda_n| with the right phase
    GapCondition step_lower;      // c in c n^(alpha-1) <= |lambda_{n+1} - lambda_n|
    GapCondition step_upper;      // C in |lambda_{n+1} - lambda_n| <= C n^(alpha-1)
    GapCondition cross;           // c in c k^(alpha-1)|k-n| <= |lambda_k - lambda_n|
    GapCondition power;           // c' in |lambda_n - lambda_k| >= c'|n-k|^alpha
    double b_lo = 0.0;
    double b_hi = 0.0;
    bool pass = false;
};

GapReport verify_gaps(const SpectrumModel& model, int n_check);

struct DistCertificate {
    double lambda = 0.0;
    double dist = 0.0;
    std::optional<std::pair<int, int>> witness;  // (i, j) with |lambda_j - lambda_i + lambda| = dist
    std::optional<double> floor;
};

inline constexpr long kDefaultEnumerationLimit = 10'000'000;

DistCertificate dist_alpha(const SpectrumModel& model, double lambda,
                           long enumeration_limit = kDefaultEnumerationLimit);

struct MuCandidates {
    std::vector<double> grid;
    int M = 0;
    double floor = 0.0;
};

MuCandidates mu_candidates(const SpectrumModel& model, int N);

struct MuSelection {
    double mu = 0.0;
    double offset = 0.0;  // mu - N
    int M = 0;
    DistCertificate cert;
};

MuSelection select_mu(const SpectrumModel& model, int N);

}  // namespace backstep
