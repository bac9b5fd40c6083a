#pragma once

#include "backstep/log_product.hpp"
#include "backstep/spectrum.hpp"
#include "backstep/types.hpp"

#include <optional>
#include <vector>

namespace backstep {

// Nodes x_i = lambda_i and y_j = lambda_j + lambda of the truncated Cauchy
// matrix 1/(x_i - y_j).
struct CauchySystem {
    std::vector<Complex> x;
    double lambda = 0.0;
    // Certified lower bound on |x_i - y_j|; entries closer than this mean the
    // certificate does not belong to this system.
    std::optional<double> certified_dist;

    int size() const { return static_cast<int>(x.size()); }
    Complex y(int j) const { return x[j] + lambda; }
};

CauchySystem make_cauchy_system(const SpectrumModel& model, double lambda, int N,
                                std::optional<double> certified_dist = std::nullopt);

// Throws ResonanceError (1-based witness) if some x_i - y_j vanishes or falls
// under the certified distance.
void check_resonance(const CauchySystem& sys);

CMatrix build_cauchy(const CauchySystem& sys);

// Row products prod_{m!=i}(1 + lambda/(x_i - x_m)) and column products
// prod_{n!=j}(1 - lambda/(x_j - x_n)).
struct LagrangeProducts {
    std::vector<LogSignedProduct> row;
    std::vector<LogSignedProduct> col;
};

LagrangeProducts lagrange_products(const CauchySystem& sys);

// Closed-form inverse of build_cauchy(sys), O(N^2) once the products are known.
CMatrix explicit_inverse(const CauchySystem& sys);
CMatrix explicit_inverse(const CauchySystem& sys, const LagrangeProducts& products);

// Gaussian elimination with partial pivoting; pivots below 1e-12 times the
// row norm are treated as singular.
CMatrix oracle_inverse(const CMatrix& a);

// Smallest truncation for which tail_log_bound is defined.
bool tail_threshold_met(const SpectrumModel& model, double lambda, int N);

// Upper bound on |sum_{m>N} log(1 +- lambda/(lambda_i - lambda_m))|, i.e. on the
// log-distance between a truncated Lagrange product and the infinite one.
double tail_log_bound(const SpectrumModel& model, int i, double lambda, int N);

}  // namespace backstep
