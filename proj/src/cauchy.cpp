#include "backstep/cauchy.hpp"

#include "backstep/error.hpp"
#include "backstep/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace backstep {

CauchySystem make_cauchy_system(const SpectrumModel& model, double lambda, int N,
                                std::optional<double> certified_dist) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw UsageError("damping parameter must be positive");
    CauchySystem sys;
    sys.x = model.eigenvalues(N);
    sys.lambda = lambda;
    sys.certified_dist = certified_dist;
    return sys;
}

void check_resonance(const CauchySystem& sys) {
    const int n = sys.size();
    // tolerate rounding in the certificate itself
    const double guard = sys.certified_dist ? *sys.certified_dist * (1.0 - 1e-9) : 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double d = std::abs(sys.x[i] - sys.y(j));
            if (d == 0.0 || d < guard) {
                std::ostringstream os;
                os << "resonance: |x_" << i + 1 << " - y_" << j + 1 << "| = " << d;
                if (sys.certified_dist) os << " below certified distance " << *sys.certified_dist;
                throw ResonanceError(os.str(), i + 1, j + 1);
            }
        }
}

CMatrix build_cauchy(const CauchySystem& sys) {
    check_resonance(sys);
    return kernels::parallel::cauchy_matrix(sys);
}

LagrangeProducts lagrange_products(const CauchySystem& sys) {
    LagrangeProducts p = kernels::parallel::lagrange_products(sys);
    for (int i = 0; i < sys.size(); ++i) {
        if (p.row[i].is_zero() || p.col[i].is_zero()) {
            // locate the vanishing factor for the message
            for (int m = 0; m < sys.size(); ++m) {
                if (m == i) continue;
                if (sys.x[i] - sys.x[m] + sys.lambda == 0.0)
                    throw ResonanceError("product factor vanishes: lambda = lambda_" + std::to_string(m + 1) +
                                             " - lambda_" + std::to_string(i + 1),
                                         m + 1, i + 1);
                if (sys.x[i] - sys.x[m] - sys.lambda == 0.0)
                    throw ResonanceError("product factor vanishes: lambda = lambda_" + std::to_string(i + 1) +
                                             " - lambda_" + std::to_string(m + 1),
                                         i + 1, m + 1);
            }
            throw ResonanceError("product factor vanishes at row " + std::to_string(i + 1), i + 1, i + 1);
        }
    }
    return p;
}

CMatrix explicit_inverse(const CauchySystem& sys) {
    check_resonance(sys);
    return kernels::parallel::explicit_inverse(sys, lagrange_products(sys));
}

CMatrix explicit_inverse(const CauchySystem& sys, const LagrangeProducts& products) {
    check_resonance(sys);
    return kernels::parallel::explicit_inverse(sys, products);
}

CMatrix oracle_inverse(const CMatrix& a) {
    if (a.rows() != a.cols()) throw UsageError("oracle_inverse needs a square matrix");
    const Eigen::Index n = a.rows();
    CMatrix work = a;
    CMatrix inv = CMatrix::Identity(n, n);
    std::vector<double> row_norm(n);
    for (Eigen::Index i = 0; i < n; ++i) row_norm[i] = a.row(i).cwiseAbs().maxCoeff();

    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index piv = col;
        double best = std::abs(work(col, col));
        for (Eigen::Index r = col + 1; r < n; ++r) {
            double v = std::abs(work(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (!(best > 1e-12 * row_norm[piv]))
            throw SingularMatrixError("matrix is singular to pivot tolerance at column " + std::to_string(col + 1));
        if (piv != col) {
            work.row(piv).swap(work.row(col));
            inv.row(piv).swap(inv.row(col));
            std::swap(row_norm[piv], row_norm[col]);
        }
        const Complex d = work(col, col);
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == col) continue;
            const Complex f = work(r, col) / d;
            if (f == 0.0) continue;
            work.row(r) -= f * work.row(col);
            inv.row(r) -= f * inv.row(col);
        }
        work.row(col) /= d;
        inv.row(col) /= d;
    }
    return inv;
}

bool tail_threshold_met(const SpectrumModel& model, double lambda, int N) {
    const double c = model.gap_c();
    if (!(c > 0.0)) return false;
    return N > std::pow(10.0 * lambda / c, 1.0 / (model.alpha() - 1.0));
}

double tail_log_bound(const SpectrumModel& model, int i, double lambda, int N) {
    if (!(lambda >= 0.0)) throw UsageError("damping parameter must be non-negative");
    if (i < 1 || i > N) throw UsageError("tail_log_bound needs 1 <= i <= N");
    if (!tail_threshold_met(model, lambda, N))
        throw UsageError("truncation " + std::to_string(N) + " is below the tail threshold (10 lambda / c)^(1/(alpha-1))");
    const double c = model.gap_c();
    const double alpha = model.alpha();
    // each |log(1 +- u)| <= 2|u| since |u| < 1/10 past the threshold, and
    // |lambda_i - lambda_m| >= c m^(alpha-1) (m - i)
    const long M = std::max<long>(2L * i, 4L * (N + 1L));
    double sum = 0.0;
    for (long m = M; m > N; --m) sum += 2.0 * lambda / (c * double(m - i) * std::pow(double(m), alpha - 1.0));
    // past M, m - i >= m/2
    sum += 4.0 * lambda / (c * (alpha - 1.0) * std::pow(double(M), alpha - 1.0));
    return sum;
}

}  // namespace backstep
