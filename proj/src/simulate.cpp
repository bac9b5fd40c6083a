#include "backstep/simulate.hpp"

#include "backstep/error.hpp"
#include "backstep/parallel.hpp"
#include "backstep/wide.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

namespace backstep {

StateVector basis_state(int n, int N) {
    if (n < 1 || n > N) throw UsageError("basis index out of range");
    StateVector y;
    y.coeffs.assign(N, Complex(0.0));
    y.coeffs[n - 1] = 1.0;
    return y;
}

double norm_H(const StateVector& y) {
    double s = 0.0;
    for (const Complex& c : y.coeffs) s += std::norm(c);
    return std::sqrt(s);
}

double norm_s(const StateVector& y, const SpectrumModel& model, double s) {
    double acc = 0.0;
    for (size_t n = 0; n < y.coeffs.size(); ++n)
        acc += std::pow(model.magnitude(int(n) + 1), 2.0 * s) * std::norm(y.coeffs[n]);
    return std::sqrt(acc);
}

namespace {

CVector as_vector(const BacksteppingSynthesis& syn, const StateVector& y) {
    if (static_cast<int>(y.coeffs.size()) != syn.N)
        throw UsageError("state has " + std::to_string(y.coeffs.size()) + " coordinates, synthesis has " +
                         std::to_string(syn.N));
    return Eigen::Map<const CVector>(y.coeffs.data(), syn.N);
}

CVector propagate_target(const BacksteppingSynthesis& syn, const CVector& target, double t) {
    CVector z = target;
    for (int n = 0; n < syn.N; ++n) z(n) *= std::exp((syn.eigen[n] - syn.lambda) * t);
    return syn.Tinv * z;
}

}  // namespace

StateVector propagate(const BacksteppingSynthesis& syn, const StateVector& y0, double t) {
    if (!(t >= 0.0)) throw UsageError("propagation time must be non-negative");
    CVector y = propagate_target(syn, syn.T * as_vector(syn, y0), t);
    StateVector out;
    out.coeffs.assign(y.data(), y.data() + y.size());
    out.s_weight = y0.s_weight;
    return out;
}

Complex control_signal(const BacksteppingSynthesis& syn, const StateVector& y0, double t) {
    StateVector y = propagate(syn, y0, t);
    Complex u = 0.0;
    for (int n = 0; n < syn.N; ++n) u += syn.k[n] * y.coeffs[n];
    return u;
}

DecayEstimate measure_decay(const BacksteppingSynthesis& syn, const StateVector& y0, const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw UsageError("time grid is empty");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw UsageError("time grid must be increasing");
    DecayEstimate d;
    const double n0 = norm_H(y0);
    if (n0 == 0.0) {
        d.C_hat = 0.0;
        d.rate_hat = -std::numeric_limits<double>::infinity();
        return d;
    }
    CVector target = syn.T * as_vector(syn, y0);
    std::vector<double> ts, logs;
    for (size_t i = 0; i < t_grid.size(); ++i) {
        double nt = propagate_target(syn, target, t_grid[i]).norm();
        d.C_hat = std::max(d.C_hat, std::exp(syn.lambda * t_grid[i]) * nt / n0);
        if (i >= t_grid.size() / 2 && nt > 0.0) {
            ts.push_back(t_grid[i]);
            logs.push_back(std::log(nt));
        }
    }
    auto fit = fit_line(ts, logs);
    d.rate_hat = fit ? fit->slope : std::numeric_limits<double>::quiet_NaN();
    return d;
}

NullControlSchedule build_schedule(const SpectrumModel& model, double horizon, double gamma, double sigma,
                                   int n_stages, int trunc_base) {
    const double alpha = model.alpha();
    const double critical = alpha / (alpha - 1.0);
    if (!(horizon > 0.0)) throw UsageError("horizon must be positive");
    if (n_stages < 1) throw UsageError("a schedule needs at least one stage");
    if (!(sigma > critical))
        throw UsageError("sigma must exceed alpha/(alpha-1) = " + std::to_string(critical));
    if (!(gamma > sigma)) throw UsageError("gamma must exceed sigma");
    if (trunc_base < 1) throw UsageError("base truncation must be positive");

    NullControlSchedule s;
    s.model = std::make_shared<const SpectrumModel>(model);
    s.horizon = horizon;
    s.gamma = gamma;
    s.sigma = sigma;
    s.stages.resize(n_stages);

    double partial = 0.0;
    int dim = trunc_base;
    for (int i = 0; i < n_stages; ++i) {
        NullControlStage& st = s.stages[i];
        st.N = i + 1;
        const double power = std::pow(double(st.N), gamma);
        st.target = static_cast<long>(std::ceil(power - 1e-9 * power));
        MuSelection sel = select_mu(model, static_cast<int>(st.target));
        st.lambda = sel.mu;
        st.dist = sel.cert.dist;
        s.offset_bound = std::max(s.offset_bound, st.lambda - power);
        st.required_trunc = std::max(trunc_base, 4 * static_cast<int>(std::ceil(std::pow(st.lambda, 1.0 / alpha))));
        dim = std::max(dim, st.required_trunc);
        partial += std::pow(st.lambda, -1.0 / sigma);
    }
    if (dim > model.n_max())
        throw UsageError("schedule needs " + std::to_string(dim) + " modes but the model holds " +
                         std::to_string(model.n_max()));
    s.dimension = dim;
    const double q = gamma / sigma;
    s.tail_remainder = std::pow(double(n_stages), 1.0 - q) / (q - 1.0);
    s.L_sigma = partial + s.tail_remainder;

    double t = 0.0;
    for (NullControlStage& st : s.stages) {
        st.delta = horizon / s.L_sigma * std::pow(st.lambda, -1.0 / sigma);
        st.t_start = t;
        t += st.delta;
        st.t_end = t;
    }

    std::vector<std::exception_ptr> errors(n_stages);
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
    for (int i = 0; i < n_stages; ++i) {
        try {
            s.stages[i].synthesis = std::make_shared<const WideSynthesis>(assemble_wide(model, s.stages[i].lambda, dim));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (int i = 0; i < n_stages; ++i)
        if (errors[i]) {
            try {
                std::rethrow_exception(errors[i]);
            } catch (const ResonanceError& e) {
                throw ResonanceError("stage " + std::to_string(i + 1) + ": " + e.what(), e.i(), e.j());
            }
        }
    return s;
}

namespace {

double wide_norm(const WideVector& v) {
    WideReal acc(0);
    for (Eigen::Index i = 0; i < v.size(); ++i) acc += boost::multiprecision::norm(v(i));
    return static_cast<double>(sqrt(acc));
}

double wide_norm_s(const WideVector& v, const SpectrumModel& model, double s) {
    WideReal acc(0);
    for (Eigen::Index i = 0; i < v.size(); ++i)
        acc += WideReal(std::pow(model.magnitude(int(i) + 1), 2.0 * s)) * boost::multiprecision::norm(v(i));
    return static_cast<double>(sqrt(acc));
}

}  // namespace

NullControlReport run_null_control(const NullControlSchedule& schedule, const StateVector& y0,
                                   const NullControlOptions& opt) {
    if (static_cast<int>(y0.coeffs.size()) != schedule.dimension)
        throw UsageError("initial state has " + std::to_string(y0.coeffs.size()) + " coordinates, the schedule uses " +
                         std::to_string(schedule.dimension));
    if (opt.samples_per_stage < 1) throw UsageError("samples_per_stage must be positive");
    const SpectrumModel& model = *schedule.model;
    const double s_weight = y0.s_weight.value_or(opt.s);
    if (!(s_weight >= 0.0 && s_weight < 1.0 - 1.0 / (2.0 * model.alpha())))
        throw UsageError("weight s must lie in [0, 1 - 1/(2 alpha))");

    NullControlReport rep;
    rep.epsilon = opt.epsilon;
    rep.norm0 = norm_H(y0);

    // cost constants fitted over the schedule's own stages
    std::vector<double> xs, ys;
    for (const NullControlStage& st : schedule.stages) {
        xs.push_back(std::pow(st.lambda, 1.0 / model.alpha()));
        ys.push_back(std::log(st.synthesis->norm_T * st.synthesis->norm_Tinv));
    }
    if (auto fit = fit_line(xs, ys)) {
        rep.cost_rate = fit->slope;
        rep.cost_log_offset = fit->intercept;
    } else {
        rep.cost_rate = ys.front() / xs.front();
    }

    WideVector y(schedule.dimension);
    for (int n = 0; n < schedule.dimension; ++n) y(n) = WideComplex(y0.coeffs[n].real(), y0.coeffs[n].imag());

    for (size_t si = 0; si < schedule.stages.size(); ++si) {
        const NullControlStage& st = schedule.stages[si];
        const WideSynthesis& syn = *st.synthesis;
        StageRecord rec;
        rec.N = st.N;
        rec.lambda = st.lambda;
        rec.delta = st.delta;
        rec.t_start = st.t_start;
        rec.t_end = st.t_end;
        rec.certified_log_factor = std::log(syn.norm_T * syn.norm_Tinv) - st.lambda * st.delta;
        rec.contraction_exponent = rep.cost_rate * std::pow(st.lambda, 1.0 / model.alpha()) - st.lambda * st.delta;

        const double start_norm = wide_norm(y);
        WideVector target = syn.T * y;
        WideVector y_end = y;
        for (int k = 0; k <= opt.samples_per_stage; ++k) {
            const double tau = st.delta * k / opt.samples_per_stage;
            WideVector yt = k == 0 ? y : propagate_from_target(syn, target, tau);
            TrajectorySample smp;
            smp.t = st.t_start + tau;
            smp.norm_H = wide_norm(yt);
            smp.norm_s = wide_norm_s(yt, model, s_weight);
            smp.u = static_cast<double>(abs(control_wide(syn, yt)));
            rec.max_u = std::max(rec.max_u, smp.u);
            rep.trajectory.push_back(smp);
            if (k == opt.samples_per_stage) y_end = yt;
        }
        y = y_end;
        rec.norm_H_end = wide_norm(y);
        rec.norm_s_end = wide_norm_s(y, model, s_weight);
        rec.log_growth = start_norm > 0.0 && rec.norm_H_end > 0.0 ? std::log(rec.norm_H_end / start_norm) : 0.0;
        if (start_norm > 0.0 && rec.log_growth > rec.certified_log_factor + 1e-6) {
            std::ostringstream os;
            os << "stage " << st.N << " grew the state by exp(" << rec.log_growth << "), above its certified factor exp("
               << rec.certified_log_factor << ")";
            throw DivergenceError(os.str(), st.N);
        }
        rep.stages.push_back(rec);
    }
    rep.final_ratio = rep.norm0 > 0.0 ? rep.stages.back().norm_H_end / rep.norm0 : 0.0;
    rep.reached = rep.final_ratio <= opt.epsilon;
    return rep;
}

}  // namespace backstep
