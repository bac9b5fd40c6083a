#include "backstep/quantitative.hpp"

#include "backstep/error.hpp"
#include "backstep/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace backstep {

FValue eval_F(const SpectrumModel& model, int n, double lambda, int N) {
    if (n < 1 || n > N) throw UsageError("eval_F index out of range");
    if (!(lambda >= 0.0)) throw UsageError("damping parameter must be non-negative");
    FValue out;
    const ExtComplex ln = model.eigenvalue(n);
    const long double lam = lambda;
    for (int m = 1; m <= N; ++m) {
        if (m == n) continue;
        ExtComplex u = lam / (ln - ExtComplex(model.eigenvalue(m)));
        out.value.multiply_one_plus(u);
        if (out.value.is_zero())
            throw ResonanceError("F_" + std::to_string(n) + " has a vanishing factor at m = " + std::to_string(m), m, n);
    }
    if (lambda == 0.0)
        out.tail_bar = 0.0;
    else if (tail_threshold_met(model, lambda, N))
        out.tail_bar = tail_log_bound(model, n, lambda, N);
    return out;
}

Complex eval_J(const SpectrumModel& model, int n, double lambda, int N) {
    if (n < 1 || n > N) throw UsageError("eval_J index out of range");
    std::vector<ExtComplex> z(N);
    for (int m = 0; m < N; ++m) z[m] = ExtComplex(model.eigenvalue(m + 1));
    const long double lam = lambda;
    const int c = n - 1;

    auto term = [&](int j) -> ExtComplex {
        // (z_j - z_m - lambda)/(z_j - z_m) pairs for m != j, n; the m = j numerator
        // factor is -lambda and the m = n denominator factor is z_j - z_n
        LogSignedProduct p;
        for (int m = 0; m < N; ++m) {
            if (m == j || m == c) continue;
            p.multiply_one_plus(-lam / (z[j] - z[m]));
        }
        if (j == c) return p.ext_value();
        p.multiply(-lam / (z[j] - z[c]));
        return p.ext_value();
    };

    // Neumaier compensation on both components
    long double s_re = 0.0L, c_re = 0.0L, s_im = 0.0L, c_im = 0.0L;
    auto add = [](long double& s, long double& comp, long double v) {
        long double t = s + v;
        if (std::fabs(s) >= std::fabs(v))
            comp += (s - t) + v;
        else
            comp += (v - t) + s;
        s = t;
    };
    auto push = [&](int j) {
        ExtComplex t = term(j);
        add(s_re, c_re, t.real());
        add(s_im, c_im, t.imag());
    };
    push(c);
    for (int d = 1; d < N; ++d) {
        if (c - d >= 0) push(c - d);
        if (c + d < N) push(c + d);
    }
    return Complex(static_cast<double>(s_re + c_re), static_cast<double>(s_im + c_im));
}

ProductBoundReport bound_check_products(const SpectrumModel& model, const std::vector<double>& lambda_grid, int N) {
    ProductBoundReport r;
    r.lambdas = lambda_grid;
    r.sup_log.resize(lambda_grid.size());
    std::vector<double> x(lambda_grid.size());
    for (size_t k = 0; k < lambda_grid.size(); ++k) {
        CauchySystem sys = make_cauchy_system(model, lambda_grid[k], N);
        check_resonance(sys);
        LagrangeProducts p = lagrange_products(sys);
        double sup = -std::numeric_limits<double>::infinity();
        for (const auto& row : p.row) sup = std::max(sup, row.log_magnitude());
        r.sup_log[k] = sup;
        x[k] = std::pow(lambda_grid[k], 1.0 / model.alpha());
    }
    r.fit = fit_line(x, r.sup_log);
    if (!r.fit) {
        r.note = "fewer than two distinct damping values; no fit";
        r.pass = false;
        return r;
    }
    r.pass = r.fit->r2 >= 0.95 && r.fit->slope > 0.0;
    return r;
}

SumBoundReport bound_check_sums(const SpectrumModel& model, double lambda, int N, double ratio_cap) {
    SumBoundReport r;
    r.lambda = lambda;
    r.dist = dist_alpha(model, lambda).dist;
    if (!(r.dist > 0.0)) throw ResonanceError("sum bound check at a resonant damping value", 0, 0);
    std::vector<Complex> x = model.eigenvalues(N);
    const double l2 = lambda * lambda;
    for (int i = 0; i < N; ++i) {
        double row = 0.0, col = 0.0;
        for (int j = 0; j < N; ++j) {
            row += l2 / std::abs(x[j] - x[i] - lambda);
            col += l2 / std::abs(x[i] - x[j] - lambda);
        }
        r.row_max = std::max(r.row_max, row);
        r.col_max = std::max(r.col_max, col);
    }
    r.reference = l2 + l2 / r.dist;
    r.ratio = std::max(r.row_max, r.col_max) / r.reference;
    r.pass = r.ratio <= ratio_cap;
    return r;
}

int default_probe_depth(const SpectrumModel& model, double lambda, int N) {
    int d = 2 * static_cast<int>(std::ceil(std::pow(lambda, 1.0 / model.alpha()))) + 10;
    return std::min(d, N);
}

FLowerBoundReport lower_bound_check_F(const SpectrumModel& model, const std::vector<double>& mu_sequence, int N) {
    FLowerBoundReport r;
    r.mus = mu_sequence;
    r.min_log_ratio.resize(mu_sequence.size());
    std::vector<double> x(mu_sequence.size());
    bool finite = true;
    for (size_t k = 0; k < mu_sequence.size(); ++k) {
        const double mu = mu_sequence[k];
        const int probe = mu > 0.0 ? default_probe_depth(model, mu, N) : N;
        const double dist = mu > 0.0 ? dist_alpha(model, mu).dist : 1.0;
        double lo = std::numeric_limits<double>::infinity();
        for (int n = 1; n <= probe; ++n) {
            FValue f = eval_F(model, n, mu, N);
            if (f.value.is_zero()) finite = false;
            lo = std::min(lo, f.value.log_magnitude() - std::log(dist));
            if (f.value.log_magnitude() < -1e-12) r.modulus_at_least_one = false;
        }
        r.min_log_ratio[k] = lo;
        x[k] = std::pow(mu, 1.0 / model.alpha());
        if (!std::isfinite(lo)) finite = false;
    }
    auto fit = fit_line(x, r.min_log_ratio);
    r.rate = fit ? std::max(0.0, -fit->slope) : 0.0;
    r.offset = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < x.size(); ++k) r.offset = std::max(r.offset, -(r.min_log_ratio[k] + r.rate * x[k]));
    r.pass = finite && std::isfinite(r.rate) && std::isfinite(r.offset) &&
             (model.kind() == Kind::SelfAdjoint || r.modulus_at_least_one);
    return r;
}

namespace {

std::vector<double> admissible_s(const SpectrumModel& model, const std::vector<double>& s_values) {
    const double hi = 1.0 - 1.0 / (2.0 * model.alpha());
    std::vector<double> out;
    for (double s : s_values)
        if (s > -hi && s < hi) out.push_back(s);
    return out;
}

CostReport sweep_point(const SpectrumModel& model, int N, double lambda, int M, int trunc, const SweepOptions& opt) {
    CostReport r;
    r.N = N;
    r.lambda = lambda;
    r.M = M;
    r.offset = lambda - N;
    try {
        BacksteppingSynthesis syn = assemble(model, lambda, trunc, opt.synthesis);
        r.dist = syn.cert.dist;
        r.norm_T = syn.norm_T.value_or(operator_norm(syn.T));
        r.norm_Tinv = syn.norm_Tinv.value_or(operator_norm(syn.Tinv));
        for (double s : admissible_s(model, opt.s_values)) {
            std::vector<double> w(trunc);
            for (int n = 0; n < trunc; ++n) w[n] = std::pow(std::abs(syn.eigen[n]), s);
            r.weighted.push_back({s, weighted_operator_norm(syn.T, w), weighted_operator_norm(syn.Tinv, w)});
        }
        r.k_sup = 0.0;
        r.k_inf = std::numeric_limits<double>::infinity();
        r.kb_inf = std::numeric_limits<double>::infinity();
        for (int n = 0; n < trunc; ++n) {
            r.k_sup = std::max(r.k_sup, std::abs(syn.k[n]));
            r.k_inf = std::min(r.k_inf, std::abs(syn.k[n]));
            r.kb_inf = std::min(r.kb_inf, std::abs(syn.kb[n]));
        }
        r.F_sup = 0.0;
        r.F_inf = std::numeric_limits<double>::infinity();
        for (int n = 0; n < trunc; ++n) {
            double f = std::abs(syn.kb[n]) / lambda;
            r.F_sup = std::max(r.F_sup, f);
            r.F_inf = std::min(r.F_inf, f);
        }
        GainResult rows = rowsum_gains(syn);
        r.tail_bars = rows.tail_bar.has_value() && syn.gains.tail_bar.has_value();
        for (int n = 0; n < trunc; ++n) {
            double gap = std::abs(rows.kb[n] - syn.kb[n]);
            double bar = rows.bar(n) + syn.gains.bar(n);
            r.gain_gap = std::max(r.gain_gap, bar > 0.0 ? gap / bar : (gap == 0.0 ? 0.0 : INFINITY));
        }
        r.tb_residual_max = syn.tb_residual_max();
    } catch (const GuardError& e) {
        r.flagged = true;
        r.flag_reason = e.what();
        r.dist = dist_alpha(model, lambda).dist;
    }
    return r;
}

CostSweep run_sweep(const SpectrumModel& model, const std::vector<int>& Ns, const std::vector<double>& lambdas,
                    const std::vector<int>& Ms, int trunc, const SweepOptions& opt) {
    if (lambdas.empty()) throw UsageError("sweep range is empty");
    CostSweep out;
    out.rows.resize(lambdas.size());
    const long count = static_cast<long>(lambdas.size());
    std::vector<std::exception_ptr> errors(lambdas.size());
    auto body = [&](long i) {
        try {
            out.rows[i] = sweep_point(model, Ns[i], lambdas[i], Ms[i], trunc, opt);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    if (opt.parallel) {
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
        for (long i = 0; i < count; ++i) body(i);
    } else {
        for (long i = 0; i < count; ++i) body(i);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<double> x, y;
    for (const CostReport& r : out.rows) {
        if (r.flagged) continue;
        x.push_back(std::pow(r.lambda, 1.0 / model.alpha()));
        y.push_back(std::log(r.norm_T + r.norm_Tinv));
    }
    out.fit = fit_line(x, y);
    const double slope = out.fit ? out.fit->slope : std::numeric_limits<double>::quiet_NaN();
    for (CostReport& r : out.rows) r.fitted_exponent = slope;
    return out;
}

}  // namespace

CostSweep cost_sweep(const SpectrumModel& model, const std::vector<int>& N_range, int trunc, const SweepOptions& opt) {
    if (N_range.empty()) throw UsageError("sweep range is empty");
    std::vector<double> lambdas;
    std::vector<int> Ms;
    for (int N : N_range) {
        MuSelection sel = select_mu(model, N);
        lambdas.push_back(sel.mu);
        Ms.push_back(sel.M);
    }
    if (model.kind() == Kind::SkewAdjoint)
        for (size_t i = 0; i < N_range.size(); ++i) lambdas[i] = N_range[i];
    return run_sweep(model, N_range, lambdas, Ms, trunc, opt);
}

CostSweep cost_sweep_lambdas(const SpectrumModel& model, const std::vector<double>& lambdas, int trunc,
                             const SweepOptions& opt) {
    if (lambdas.empty()) throw UsageError("sweep range is empty");
    std::vector<int> Ns, Ms(lambdas.size(), 0);
    for (double l : lambdas) {
        if (!(l > 0.0)) throw UsageError("damping values must be positive");
        Ns.push_back(static_cast<int>(std::floor(l)));
    }
    return run_sweep(model, Ns, lambdas, Ms, trunc, opt);
}

}  // namespace backstep
