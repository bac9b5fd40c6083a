#include "backstep/spectrum.hpp"

#include "backstep/error.hpp"
#include "backstep/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace backstep {

std::string to_string(Kind kind) {
    return kind == Kind::SelfAdjoint ? "self_adjoint" : "skew_adjoint";
}

Kind kind_from_string(const std::string& s) {
    if (s == "self_adjoint" || s == "heat" || s == "self") return Kind::SelfAdjoint;
    if (s == "skew_adjoint" || s == "schrodinger" || s == "skew") return Kind::SkewAdjoint;
    throw UsageError("unknown spectrum kind '" + s + "' (expected self_adjoint or skew_adjoint)");
}

namespace {

Complex law_value(Kind kind, double scale, double alpha, int n) {
    double m = scale * std::pow(static_cast<double>(n), alpha);
    return kind == Kind::SelfAdjoint ? Complex(-m, 0.0) : Complex(0.0, -m);
}

void check_alpha(double alpha) {
    if (!(alpha > 1.0) || !std::isfinite(alpha))
        throw UsageError("alpha must be > 1 (got " + std::to_string(alpha) +
                         "); the construction needs superlinear eigenvalue growth");
}

// Empirical minimum of |lambda_k - lambda_n| / (max(k,n)^(alpha-1) |k-n|) over
// the first n eigenvalues.
double scan_cross(const std::vector<double>& mag, double alpha, int* wi = nullptr, int* wj = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    int n = static_cast<int>(mag.size());
    for (int i = 1; i <= n; ++i)
        for (int k = i + 1; k <= n; ++k) {
            double r = std::abs(mag[k - 1] - mag[i - 1]) / (std::pow(k, alpha - 1.0) * (k - i));
            if (r < best) {
                best = r;
                if (wi) *wi = k;
                if (wj) *wj = i;
            }
        }
    return best;
}

}  // namespace

SpectrumModel SpectrumModel::power_law(Kind kind, double alpha, double scale, int n_max, const BLaw& b_law) {
    check_alpha(alpha);
    if (!(scale > 0.0)) throw UsageError("scale must be positive");
    if (n_max < 2) throw UsageError("n_max must be at least 2");
    SpectrumModel m;
    m.kind_ = kind;
    m.alpha_ = alpha;
    m.scale_ = scale;
    m.power_law_ = true;
    m.eigenvalues_.resize(n_max);
    m.b_.resize(n_max);
    for (int n = 1; n <= n_max; ++n) {
        m.eigenvalues_[n - 1] = law_value(kind, scale, alpha, n);
        m.b_[n - 1] = b_law ? b_law(n) : 1.0;
    }
    m.finish_bounds();
    // For a n^alpha the infimum of (k^alpha - n^alpha)/(k^(alpha-1)(k-n)) is
    // approached as n/k -> 0 and equals 1; the scan over a finite table would
    // overestimate it.
    m.gap_c_ = scale;
    m.gap_C_ = scale * (std::pow(2.0, alpha) - 1.0);
    return m;
}

SpectrumModel SpectrumModel::tabulated(Kind kind, double alpha, std::vector<Complex> eigenvalues,
                                       std::vector<double> b) {
    check_alpha(alpha);
    if (eigenvalues.size() < 2) throw UsageError("a tabulated spectrum needs at least 2 eigenvalues");
    if (b.size() != eigenvalues.size()) throw UsageError("eigenvalue and b tables differ in length");
    SpectrumModel m;
    m.kind_ = kind;
    m.alpha_ = alpha;
    m.eigenvalues_ = std::move(eigenvalues);
    m.b_ = std::move(b);
    m.scale_ = std::abs(m.eigenvalues_.front());
    m.finish_bounds();

    std::vector<double> mag(m.eigenvalues_.size());
    for (size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(m.eigenvalues_[i]);
    m.gap_c_ = scan_cross(mag, alpha);
    double upper = 0.0;
    for (size_t n = 1; n < mag.size(); ++n)
        upper = std::max(upper, std::abs(mag[n] - mag[n - 1]) / std::pow(double(n), alpha - 1.0));
    m.gap_C_ = upper;
    // A power law may come back through a table (e.g. from JSON); keep its
    // analytic constants and its extension past n_max.
    double a = m.scale_;
    bool law = a > 0.0;
    for (size_t i = 0; law && i < m.eigenvalues_.size(); ++i) {
        Complex v = law_value(kind, a, alpha, static_cast<int>(i) + 1);
        law = std::abs(v - m.eigenvalues_[i]) <= 1e-14 * std::abs(v);
    }
    if (law) {
        m.power_law_ = true;
        m.gap_c_ = a;
        m.gap_C_ = a * (std::pow(2.0, alpha) - 1.0);
    }
    return m;
}

void SpectrumModel::finish_bounds() {
    b_lo_ = std::numeric_limits<double>::infinity();
    b_hi_ = 0.0;
    for (double v : b_) {
        if (!std::isfinite(v) || !(v > 0.0))
            throw UsageError("control coefficients b_n must be positive and finite");
        b_lo_ = std::min(b_lo_, v);
        b_hi_ = std::max(b_hi_, v);
    }
}

Complex SpectrumModel::eigenvalue(int n) const {
    if (n < 1) throw UsageError("eigenvalue index must be >= 1");
    if (n <= n_max()) return eigenvalues_[n - 1];
    if (!power_law_)
        throw EnumerationOverflow("eigenvalue index " + std::to_string(n) + " beyond the tabulated range " +
                                  std::to_string(n_max()));
    return law_value(kind_, scale_, alpha_, n);
}

double SpectrumModel::magnitude(int n) const {
    if (n <= n_max() && n >= 1) return std::abs(eigenvalues_[n - 1]);
    return std::abs(eigenvalue(n));
}

double SpectrumModel::b(int n) const {
    if (n < 1 || n > n_max())
        throw UsageError("control coefficient index " + std::to_string(n) + " outside 1.." + std::to_string(n_max()));
    return b_[n - 1];
}

std::vector<Complex> SpectrumModel::eigenvalues(int n) const {
    if (n < 1 || n > n_max())
        throw UsageError("truncation " + std::to_string(n) + " exceeds the model size " + std::to_string(n_max()));
    return {eigenvalues_.begin(), eigenvalues_.begin() + n};
}

std::vector<double> SpectrumModel::b_values(int n) const {
    if (n < 1 || n > n_max())
        throw UsageError("truncation " + std::to_string(n) + " exceeds the model size " + std::to_string(n_max()));
    return {b_.begin(), b_.begin() + n};
}

SpectrumModel make_spectrum(Kind kind, double alpha, double scale, int n_max, const BLaw& b_law) {
    return SpectrumModel::power_law(kind, alpha, scale, n_max, b_law);
}

GapReport verify_gaps(const SpectrumModel& model, int n_check) {
    if (n_check < 2 || n_check > model.n_max())
        throw UsageError("n_check must lie in 2..n_max");
    const double alpha = model.alpha();
    GapReport r;
    r.n_check = n_check;

    std::vector<double> mag(n_check);
    r.ordered = true;
    for (int n = 1; n <= n_check; ++n) {
        Complex v = model.eigenvalue(n);
        mag[n - 1] = std::abs(v);
        bool phase_ok = model.kind() == Kind::SelfAdjoint ? (v.imag() == 0.0 && v.real() < 0.0)
                                                         : (v.real() == 0.0 && v.imag() < 0.0);
        if (!phase_ok) r.ordered = false;
        if (n > 1 && !(mag[n - 1] > mag[n - 2])) r.ordered = false;
    }

    r.step_lower = {"step_lower", std::numeric_limits<double>::infinity(), 0, 0, false};
    r.step_upper = {"step_upper", 0.0, 0, 0, false};
    for (int n = 1; n < n_check; ++n) {
        double ratio = std::abs(mag[n] - mag[n - 1]) / std::pow(double(n), alpha - 1.0);
        if (ratio < r.step_lower.constant) r.step_lower = {"step_lower", ratio, n + 1, n, false};
        if (ratio > r.step_upper.constant) r.step_upper = {"step_upper", ratio, n + 1, n, false};
    }

    r.cross.name = "cross";
    r.cross.constant = scan_cross(mag, alpha, &r.cross.worst_i, &r.cross.worst_j);

    r.power = {"power", std::numeric_limits<double>::infinity(), 0, 0, false};
    for (int i = 1; i <= n_check; ++i)
        for (int k = i + 1; k <= n_check; ++k) {
            double ratio = std::abs(mag[k - 1] - mag[i - 1]) / std::pow(double(k - i), alpha);
            if (ratio < r.power.constant) r.power = {"power", ratio, k, i, false};
        }

    auto ok = [](double c) { return std::isfinite(c) && c > 0.0; };
    r.step_lower.pass = ok(r.step_lower.constant);
    r.step_upper.pass = ok(r.step_upper.constant);
    r.cross.pass = ok(r.cross.constant);
    r.power.pass = ok(r.power.constant);
    r.b_lo = model.b_lo();
    r.b_hi = model.b_hi();
    r.pass = r.ordered && r.step_lower.pass && r.step_upper.pass && r.cross.pass && r.power.pass && r.b_lo > 0.0;
    return r;
}

DistCertificate dist_alpha(const SpectrumModel& model, double lambda, long enumeration_limit) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw UsageError("damping parameter must be positive");
    DistCertificate cert;
    cert.lambda = lambda;
    cert.dist = lambda;
    cert.witness = std::make_pair(1, 1);
    if (model.kind() == Kind::SkewAdjoint) return cert;

    const double c = model.gap_c();
    if (!(c > 0.0)) throw UsageError("model has no positive gap constant; run verify_gaps");
    // A pair beating the diagonal value lambda has 0 < |lambda_j| - |lambda_i| < 2 lambda,
    // and the gap estimate then forces c (i+1)^(alpha-1) < 2 lambda.
    double cap_real = std::floor(std::pow((2.0 * lambda + 2.0 * c) / c, 1.0 / (model.alpha() - 1.0))) + 2.0;
    if (!(cap_real <= static_cast<double>(enumeration_limit)))
        throw EnumerationOverflow("Dist enumeration needs " + std::to_string(cap_real) +
                                  " indices, above the limit " + std::to_string(enumeration_limit));
    const int cap = static_cast<int>(cap_real);

    for (int i = 1; i <= cap; ++i) {
        const double mi = model.magnitude(i);
        const double target = mi + lambda;
        // smallest j > i with |lambda_j| >= |lambda_i| + lambda
        int lo = i;  // |lambda_lo| < target
        int step = 1;
        int hi = i + 1;
        while (model.magnitude(hi) < target) {
            lo = hi;
            step *= 2;
            hi = i + step;
        }
        while (hi - lo > 1) {
            int mid = lo + (hi - lo) / 2;
            if (model.magnitude(mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        for (int j : {hi - 1, hi}) {
            if (j <= i) continue;
            double v = std::abs(mi - model.magnitude(j) + lambda);
            if (v < cert.dist) {
                cert.dist = v;
                cert.witness = std::make_pair(i, j);
            }
        }
    }
    return cert;
}

MuCandidates mu_candidates(const SpectrumModel& model, int N) {
    if (model.kind() != Kind::SelfAdjoint) throw UsageError("candidate grid is defined for self-adjoint models");
    if (N < 1) throw UsageError("N must be >= 1");
    const double c = model.gap_c();
    MuCandidates out;
    out.M = static_cast<int>(std::floor(std::pow((N + c) / c, 1.0 / (model.alpha() - 1.0)))) + 2;
    out.floor = c / (2.0 * out.M);
    out.grid.resize(out.M);
    for (int i = 0; i < out.M; ++i) out.grid[i] = N + c * (1.0 + 2.0 * i) / (2.0 * out.M);
    return out;
}

MuSelection select_mu(const SpectrumModel& model, int N) {
    if (N < 1) throw UsageError("N must be >= 1");
    MuSelection sel;
    if (model.kind() == Kind::SkewAdjoint) {
        sel.mu = N + 0.5;
        sel.offset = 0.5;
        sel.cert = dist_alpha(model, sel.mu);
        return sel;
    }
    MuCandidates cand = mu_candidates(model, N);
    std::vector<DistCertificate> certs = kernels::parallel::dist_scan(model, cand.grid);
    size_t best = 0;
    for (size_t i = 1; i < certs.size(); ++i)
        if (certs[i].dist > certs[best].dist) best = i;
    if (!(certs[best].dist >= cand.floor))
        throw CertificateContradiction("no candidate in [" + std::to_string(N) + ", " + std::to_string(N + model.gap_c()) +
                                       "] clears the floor " + std::to_string(cand.floor));
    sel.mu = cand.grid[best];
    sel.offset = sel.mu - N;
    sel.M = cand.M;
    sel.cert = certs[best];
    sel.cert.floor = cand.floor;
    return sel;
}

}  // namespace backstep
