#include "backstep/linalg.hpp"

#include "backstep/error.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace backstep {

double operator_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    if (m.rows() <= 512 && m.cols() <= 512) {
        Eigen::BDCSVD<CMatrix> svd(m);
        return svd.singularValues()(0);
    }
    return power_iteration_norm(m);
}

double power_iteration_norm(const CMatrix& m, double rel_tol, int max_iter) {
    if (m.size() == 0) return 0.0;
    // deterministic start touching every direction
    CVector v(m.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(1.0 + 0.5 * std::sin(double(i + 1)), 0.0);
    v.normalize();
    double est = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        CVector w = m.adjoint() * (m * v);
        double nw = w.norm();
        if (nw == 0.0) return 0.0;
        double next = std::sqrt(nw);
        v = w / nw;
        if (std::abs(next - est) <= rel_tol * next) return next;
        est = next;
    }
    return est;
}

double weighted_operator_norm(const CMatrix& m, const std::vector<double>& w) {
    if (static_cast<Eigen::Index>(w.size()) != m.rows() || m.rows() != m.cols())
        throw UsageError("weight length does not match the matrix");
    CMatrix s = m;
    for (Eigen::Index i = 0; i < s.rows(); ++i)
        for (Eigen::Index j = 0; j < s.cols(); ++j) s(i, j) *= w[i] / w[j];
    return operator_norm(s);
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::optional<LinearFit> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) return std::nullopt;
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    f.points = static_cast<int>(x.size());
    return f;
}

}  // namespace backstep
