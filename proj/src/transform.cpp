#include "backstep/transform.hpp"

#include "backstep/error.hpp"
#include "backstep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace backstep {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Neumaier compensated sum.
Complex compensated_sum(const CMatrix& m, int row) {
    double s_re = 0.0, c_re = 0.0, s_im = 0.0, c_im = 0.0;
    auto add = [](double& s, double& c, double v) {
        double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    };
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        add(s_re, c_re, m(row, j).real());
        add(s_im, c_im, m(row, j).imag());
    }
    return {s_re + c_re, s_im + c_im};
}

void require_real(const SpectrumModel& model, const std::vector<Complex>& v, const char* what) {
    if (model.kind() != Kind::SelfAdjoint) return;
    for (const Complex& z : v)
        if (std::abs(z.imag()) > 1e-13 * std::max(1.0, std::abs(z)))
            throw std::logic_error(std::string(what) + " picked up an imaginary part on a self-adjoint model");
}

void check_gain_floor(const SpectrumModel& model, double lambda, const std::vector<Complex>& k,
                      const SynthesisOptions& opt) {
    for (size_t n = 0; n < k.size(); ++n)
        if (k[n] == 0.0 || !std::isfinite(std::abs(k[n])))
            throw GainFloorError("gain k_" + std::to_string(n + 1) + " vanished or is not finite", int(n) + 1);
    if (!opt.check_floor) return;
    const double dist = dist_alpha(model, lambda).dist;
    const double floor = 0.5 * lambda * std::exp(-opt.floor_rate * std::pow(lambda, 1.0 / model.alpha())) * dist;
    for (size_t n = 0; n < k.size(); ++n)
        if (std::abs(k[n]) < floor) {
            std::ostringstream os;
            os << "gain |k_" << n + 1 << "| = " << std::abs(k[n]) << " below the floor " << floor;
            throw GainFloorError(os.str(), int(n) + 1);
        }
}

std::optional<std::vector<double>> tails(const SpectrumModel& model, double lambda, int N) {
    if (!tail_threshold_met(model, lambda, N)) return std::nullopt;
    std::vector<double> t(N);
    for (int i = 1; i <= N; ++i) t[i - 1] = tail_log_bound(model, i, lambda, N);
    return t;
}

GainResult rowsum_from_inverse(const SpectrumModel& model, double lambda, int N, const CMatrix& inv) {
    GainResult g;
    g.k.resize(N);
    g.kb.resize(N);
    g.rounding_bar.resize(N);
    auto t = tails(model, lambda, N);
    if (t) g.tail_bar = std::vector<double>(N);
    for (int n = 0; n < N; ++n) {
        g.kb[n] = compensated_sum(inv, n);
        g.k[n] = g.kb[n] / model.b(n + 1);
        double abs_sum = inv.row(n).cwiseAbs().sum();
        g.rounding_bar[n] = 8.0 * N * kEps * abs_sum;
        if (t) {
            double bar = 0.0;
            for (int j = 0; j < N; ++j) bar += std::abs(inv(n, j)) * std::expm1((*t)[n] + (*t)[j]);
            (*g.tail_bar)[n] = bar;
        }
    }
    return g;
}

GainResult product_from_products(const SpectrumModel& model, double lambda, int N, const LagrangeProducts& p) {
    GainResult g;
    g.k.resize(N);
    g.kb.resize(N);
    g.rounding_bar.resize(N);
    auto t = tails(model, lambda, N);
    if (t) g.tail_bar = std::vector<double>(N);
    for (int n = 0; n < N; ++n) {
        LogSignedProduct f = p.row[n];
        f.multiply(-static_cast<long double>(lambda));
        g.kb[n] = f.value();
        g.k[n] = g.kb[n] / model.b(n + 1);
        double mag = f.magnitude();
        g.rounding_bar[n] = 4.0 * N * kEps * mag;
        if (t) (*g.tail_bar)[n] = mag * std::expm1((*t)[n]);
    }
    return g;
}

}  // namespace

GainResult feedback_gains_rowsum(const SpectrumModel& model, double lambda, int N, const SynthesisOptions& opt) {
    CauchySystem sys = make_cauchy_system(model, lambda, N);
    CMatrix inv = explicit_inverse(sys);
    GainResult g = rowsum_from_inverse(model, lambda, N, inv);
    require_real(model, g.k, "row-sum gains");
    check_gain_floor(model, lambda, g.k, opt);
    return g;
}

GainResult feedback_gains_product(const SpectrumModel& model, double lambda, int N, const SynthesisOptions& opt) {
    CauchySystem sys = make_cauchy_system(model, lambda, N);
    check_resonance(sys);
    GainResult g = product_from_products(model, lambda, N, lagrange_products(sys));
    require_real(model, g.k, "product gains");
    check_gain_floor(model, lambda, g.k, opt);
    return g;
}

GainResult rowsum_gains(const BacksteppingSynthesis& syn) {
    return rowsum_from_inverse(*syn.model, syn.lambda, syn.N, syn.checkTinv);
}

double BacksteppingSynthesis::tb_residual_max() const {
    double m = 0.0;
    for (double r : tb_residuals) m = std::max(m, r);
    return m;
}

double tb_residual(const BacksteppingSynthesis& syn, int j) {
    if (j < 1 || j > syn.N) throw UsageError("tb_residual index out of range");
    const long double lam = syn.lambda;
    ExtComplex acc = 0.0L;
    for (int n = 0; n < syn.N; ++n)
        acc += ExtComplex(syn.kb[n]) / (ExtComplex(syn.eigen[j - 1]) - ExtComplex(syn.eigen[n]) - lam);
    return static_cast<double>(std::abs(acc - 1.0L));
}

BacksteppingSynthesis assemble(const SpectrumModel& model, double lambda, int N, const SynthesisOptions& opt) {
    BacksteppingSynthesis syn;
    syn.model = std::make_shared<const SpectrumModel>(model);
    syn.lambda = lambda;
    syn.N = N;
    syn.cert = dist_alpha(model, lambda);
    if (!(syn.cert.dist > 0.0)) {
        auto [i, j] = syn.cert.witness.value_or(std::make_pair(0, 0));
        throw ResonanceError("damping parameter is resonant: lambda = lambda_" + std::to_string(i) + " - lambda_" +
                                 std::to_string(j),
                             i, j);
    }
    syn.eigen = model.eigenvalues(N);
    syn.b = model.b_values(N);

    CauchySystem sys = make_cauchy_system(model, lambda, N, syn.cert.dist);
    syn.checkT = build_cauchy(sys);
    LagrangeProducts products = lagrange_products(sys);
    syn.checkTinv = explicit_inverse(sys, products);

    syn.gains = product_from_products(model, lambda, N, products);
    syn.k = syn.gains.k;
    syn.kb = syn.gains.kb;
    require_real(model, syn.k, "gains");
    check_gain_floor(model, lambda, syn.k, opt);

    syn.T.resize(N, N);
    syn.Tinv.resize(N, N);
    for (int n = 0; n < N; ++n)
        for (int p = 0; p < N; ++p) {
            syn.T(p, n) = syn.b[p] * syn.checkT(p, n) * syn.k[n];
            syn.Tinv(p, n) = syn.checkTinv(p, n) / (syn.k[p] * syn.b[n]);
        }
    if (!syn.T.allFinite() || !syn.Tinv.allFinite())
        throw GuardError("transformation has non-finite entries at lambda = " + std::to_string(lambda));

    syn.tb_residuals.resize(N);
    for (int j = 1; j <= N; ++j) syn.tb_residuals[j - 1] = tb_residual(syn, j);

    if (opt.compute_norms) {
        syn.norm_T = operator_norm(syn.T);
        syn.norm_Tinv = operator_norm(syn.Tinv);
    }
    return syn;
}

ChiFunction chi(const SpectrumModel& model, double lambda, int n, int N) {
    if (n < 1 || n > N) throw UsageError("chi index out of range");
    ChiFunction c;
    c.n = n;
    c.coeffs.resize(N);
    const Complex ln = model.eigenvalue(n);
    for (int p = 1; p <= N; ++p) {
        Complex d = model.eigenvalue(p) - ln + lambda;
        if (d == 0.0) throw ResonanceError("chi_" + std::to_string(n) + " hits a resonance at p = " + std::to_string(p), n, p);
        c.coeffs[p - 1] = model.b(p) / d;
    }
    return c;
}

CMatrix closed_loop_matrix(const BacksteppingSynthesis& syn) {
    CMatrix a(syn.N, syn.N);
    for (int n = 0; n < syn.N; ++n)
        for (int p = 0; p < syn.N; ++p) a(p, n) = syn.b[p] * syn.k[n] + (p == n ? syn.eigen[p] : Complex(0.0));
    return a;
}

ClosedLoopCheck verify_closed_loop_eigen(const BacksteppingSynthesis& syn, int n) {
    if (n < 1 || n > syn.N) throw UsageError("closed-loop check index out of range");
    ChiFunction c = chi(*syn.model, syn.lambda, n, syn.N);
    CVector x = Eigen::Map<const CVector>(c.coeffs.data(), syn.N);

    ClosedLoopCheck out;
    out.k_on_chi = 0.0;
    for (int p = 0; p < syn.N; ++p) out.k_on_chi += syn.k[p] * x(p);

    CVector tx = syn.T * x;
    CVector off = tx;
    off(n - 1) = 0.0;
    double ntx = tx.norm();
    out.collinearity_defect = ntx > 0.0 ? off.norm() / ntx : 0.0;

    CVector ax = closed_loop_matrix(syn) * x - (syn.eigen[n - 1] - syn.lambda) * x;
    out.eigen_defect = ax.norm() / x.norm();
    return out;
}

IdentityResidual operator_identity_residual(const BacksteppingSynthesis& syn) {
    CMatrix acl = closed_loop_matrix(syn);
    CMatrix lhs = syn.T * acl;
    CMatrix rhs = syn.T;
    for (int p = 0; p < syn.N; ++p) rhs.row(p) *= (syn.eigen[p] - syn.lambda);
    IdentityResidual r;
    r.absolute = max_abs(lhs - rhs);
    double max_eig = 0.0, max_b = 0.0, max_k = 0.0;
    for (int p = 0; p < syn.N; ++p) {
        max_eig = std::max(max_eig, std::abs(syn.eigen[p]));
        max_b = std::max(max_b, syn.b[p]);
        max_k = std::max(max_k, std::abs(syn.k[p]));
    }
    double scale = max_abs(syn.T) * (max_eig + syn.lambda) + max_b * max_k;
    r.relative = scale > 0.0 ? r.absolute / scale : r.absolute;
    return r;
}

}  // namespace backstep
