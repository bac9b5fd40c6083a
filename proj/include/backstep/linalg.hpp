#pragma once

#include "backstep/types.hpp"

#include <optional>
#include <vector>

namespace backstep {

// Largest singular value. Dense SVD up to 512 rows, power iteration on
// M^H M beyond that (stops at 1e-10 relative stagnation).
double operator_norm(const CMatrix& m);
double power_iteration_norm(const CMatrix& m, double rel_tol = 1e-10, int max_iter = 10000);

// Norm of M on the space weighted by w: largest singular value of W M W^-1.
double weighted_operator_norm(const CMatrix& m, const std::vector<double>& w);

double max_abs(const CMatrix& m);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int points = 0;
};

// Ordinary least squares y ~ intercept + slope x. Empty when fewer than two
// distinct abscissae.
std::optional<LinearFit> fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace backstep
