#include "backstep/wide.hpp"

#include "backstep/error.hpp"
#include "backstep/linalg.hpp"

#include <string>

namespace backstep {

Complex to_double(const WideComplex& z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

CMatrix to_double(const WideMatrix& m) {
    CMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
    return out;
}

CVector to_double(const WideVector& v) {
    CVector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = to_double(v(i));
    return out;
}

WideVector to_wide(const CVector& v) {
    WideVector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = WideComplex(v(i).real(), v(i).imag());
    return out;
}

WideSynthesis assemble_wide(const SpectrumModel& model, double lambda, int N) {
    DistCertificate cert = dist_alpha(model, lambda);
    if (!(cert.dist > 0.0)) {
        auto [i, j] = cert.witness.value_or(std::make_pair(0, 0));
        throw ResonanceError("damping parameter is resonant", i, j);
    }
    WideSynthesis s;
    s.lambda = lambda;
    s.N = N;
    s.eigen.resize(N);
    s.b.resize(N);
    for (int n = 0; n < N; ++n) {
        Complex v = model.eigenvalue(n + 1);
        s.eigen[n] = WideComplex(v.real(), v.imag());
        s.b[n] = model.b(n + 1);
    }
    const WideComplex lam(lambda);
    const WideComplex one(1);

    std::vector<WideComplex> row(N, one), col(N, one);
    for (int i = 0; i < N; ++i)
        for (int m = 0; m < N; ++m) {
            if (m == i) continue;
            WideComplex d = s.eigen[i] - s.eigen[m];
            row[i] *= one + lam / d;
            col[i] *= one - lam / d;
        }

    s.k.resize(N);
    for (int n = 0; n < N; ++n) {
        s.k[n] = -lam * row[n] / WideComplex(s.b[n]);
        if (s.k[n] == WideComplex(0)) throw GainFloorError("gain k_" + std::to_string(n + 1) + " vanished", n + 1);
    }

    s.T.resize(N, N);
    s.Tinv.resize(N, N);
    for (int n = 0; n < N; ++n)
        for (int p = 0; p < N; ++p) {
            s.T(p, n) = WideComplex(s.b[p]) * s.k[n] / (s.eigen[p] - s.eigen[n] - lam);
            WideComplex inv_entry = lam * lam / (s.eigen[n] - s.eigen[p] - lam) * row[p] * col[n];
            s.Tinv(p, n) = inv_entry / (s.k[p] * WideComplex(s.b[n]));
        }
    s.norm_T = operator_norm(to_double(s.T));
    s.norm_Tinv = operator_norm(to_double(s.Tinv));
    return s;
}

WideVector propagate_from_target(const WideSynthesis& syn, const WideVector& target, double t) {
    WideVector z = target;
    const WideComplex tt(t);
    const WideComplex lam(syn.lambda);
    for (int n = 0; n < syn.N; ++n) z(n) *= exp((syn.eigen[n] - lam) * tt);
    return syn.Tinv * z;
}

WideVector propagate_wide(const WideSynthesis& syn, const WideVector& y0, double t) {
    if (y0.size() != syn.N) throw UsageError("state dimension does not match the synthesis");
    return propagate_from_target(syn, syn.T * y0, t);
}

WideComplex control_wide(const WideSynthesis& syn, const WideVector& y) {
    WideComplex u(0);
    for (int n = 0; n < syn.N; ++n) u += syn.k[n] * y(n);
    return u;
}

}  // namespace backstep
