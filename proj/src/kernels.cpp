#include "backstep/kernels.hpp"

#include "backstep/parallel.hpp"

#include <cmath>
#include <exception>

namespace backstep::kernels {

namespace {

inline Complex cauchy_entry(const CauchySystem& sys, int i, int j) { return 1.0 / (sys.x[i] - sys.y(j)); }

inline LogSignedProduct row_product(const CauchySystem& sys, int i) {
    LogSignedProduct p;
    const int n = sys.size();
    for (int m = 0; m < n; ++m)
        if (m != i) p.multiply_one_plus(static_cast<long double>(sys.lambda) / (ExtComplex(sys.x[i]) - ExtComplex(sys.x[m])));
    return p;
}

inline LogSignedProduct col_product(const CauchySystem& sys, int j) {
    LogSignedProduct p;
    const int n = sys.size();
    for (int m = 0; m < n; ++m)
        if (m != j) p.multiply_one_plus(-static_cast<long double>(sys.lambda) / (ExtComplex(sys.x[j]) - ExtComplex(sys.x[m])));
    return p;
}

inline Complex inverse_entry(const CauchySystem& sys, const LagrangeProducts& p, int i, int j) {
    LogSignedProduct e = p.row[i] * p.col[j];
    const long double lam = sys.lambda;
    e.multiply(lam * lam / (ExtComplex(sys.x[j]) - ExtComplex(sys.x[i]) - lam));
    return e.value();
}

}  // namespace

namespace serial {

CMatrix cauchy_matrix(const CauchySystem& sys) {
    const int n = sys.size();
    CMatrix c(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = cauchy_entry(sys, i, j);
    return c;
}

LagrangeProducts lagrange_products(const CauchySystem& sys) {
    const int n = sys.size();
    LagrangeProducts p{std::vector<LogSignedProduct>(n), std::vector<LogSignedProduct>(n)};
    for (int i = 0; i < n; ++i) {
        p.row[i] = row_product(sys, i);
        p.col[i] = col_product(sys, i);
    }
    return p;
}

CMatrix explicit_inverse(const CauchySystem& sys, const LagrangeProducts& p) {
    const int n = sys.size();
    CMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = inverse_entry(sys, p, i, j);
    return inv;
}

std::vector<DistCertificate> dist_scan(const SpectrumModel& model, const std::vector<double>& lambdas) {
    std::vector<DistCertificate> out(lambdas.size());
    for (size_t k = 0; k < lambdas.size(); ++k) out[k] = dist_alpha(model, lambdas[k]);
    return out;
}

}  // namespace serial

namespace parallel {

CMatrix cauchy_matrix(const CauchySystem& sys) {
    const int n = sys.size();
    CMatrix c(n, n);
#pragma omp parallel for num_threads(thread_count()) schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) c(i, j) = cauchy_entry(sys, i, j);
    return c;
}

LagrangeProducts lagrange_products(const CauchySystem& sys) {
    const int n = sys.size();
    LagrangeProducts p{std::vector<LogSignedProduct>(n), std::vector<LogSignedProduct>(n)};
#pragma omp parallel for num_threads(thread_count()) schedule(static)
    for (int i = 0; i < n; ++i) {
        p.row[i] = row_product(sys, i);
        p.col[i] = col_product(sys, i);
    }
    return p;
}

CMatrix explicit_inverse(const CauchySystem& sys, const LagrangeProducts& p) {
    const int n = sys.size();
    CMatrix inv(n, n);
#pragma omp parallel for num_threads(thread_count()) schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) inv(i, j) = inverse_entry(sys, p, i, j);
    return inv;
}

std::vector<DistCertificate> dist_scan(const SpectrumModel& model, const std::vector<double>& lambdas) {
    std::vector<DistCertificate> out(lambdas.size());
    const long n = static_cast<long>(lambdas.size());
    // exceptions must not leave the parallel region
    std::vector<std::exception_ptr> errors(lambdas.size());
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
    for (long k = 0; k < n; ++k) {
        try {
            out[k] = dist_alpha(model, lambdas[k]);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace parallel

}  // namespace backstep::kernels
