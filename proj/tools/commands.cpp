#include "commands.hpp"

#include "backstep/cauchy.hpp"
#include "backstep/error.hpp"
#include "backstep/io.hpp"
#include "backstep/linalg.hpp"
#include "backstep/quantitative.hpp"
#include "backstep/simulate.hpp"
#include "backstep/spectrum.hpp"
#include "backstep/transform.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace backstep::cli {

namespace {

SpectrumModel load_model(const ModelArgs& a) {
    if (!a.model_file.empty()) {
        std::ifstream in(a.model_file);
        if (!in) throw UsageError("cannot open model file " + a.model_file);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw UsageError("model file " + a.model_file + " is not valid JSON: " + e.what());
        }
        return model_from_json(j);
    }
    return make_spectrum(kind_from_string(a.kind), a.alpha, a.scale, a.n_max);
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

StateVector random_unit_state(int N, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    StateVector y;
    y.coeffs.resize(N);
    for (auto& c : y.coeffs) c = Complex(g(rng), 0.0);
    double n = norm_H(y);
    for (auto& c : y.coeffs) c /= n;
    return y;
}

StateVector load_state(const std::string& file, const std::string& preset, int N, unsigned long long seed) {
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw UsageError("cannot open state file " + file);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw UsageError("state file " + file + " is not valid JSON: " + e.what());
        }
        StateVector y = state_from_json(j);
        if (static_cast<int>(y.coeffs.size()) != N)
            throw UsageError("state file has " + std::to_string(y.coeffs.size()) + " entries, expected " +
                             std::to_string(N));
        return y;
    }
    if (preset == "phi1") return basis_state(1, N);
    if (preset == "phi12") {
        StateVector y = basis_state(1, N);
        if (N >= 2) y.coeffs[1] = 1.0;
        return y;
    }
    if (preset == "random") return random_unit_state(N, seed);
    if (preset == "zero") return StateVector{std::vector<Complex>(N, Complex(0.0)), std::nullopt};
    throw UsageError("unknown state preset '" + preset + "' (phi1, phi12, random, zero)");
}

}  // namespace

int cmd_spectrum_check(const SpectrumCheckArgs& a) {
    SpectrumModel model = load_model(a.model);
    int n_check = a.n_check > 0 ? a.n_check : std::min(model.n_max(), 200);
    GapReport r = verify_gaps(model, n_check);
    json j = gap_report_to_json(r);
    j["model"] = {{"kind", to_string(model.kind())}, {"alpha", model.alpha()}, {"n_max", model.n_max()},
                  {"gap_c", model.gap_c()}, {"gap_C", model.gap_C()}};
    emit(a.out, dump(j));
    if (!r.pass) {
        std::cerr << "gap conditions fail on the first " << n_check << " eigenvalues\n";
        return 3;
    }
    return 0;
}

int cmd_cauchy_verify(const CauchyVerifyArgs& a) {
    SpectrumModel model = load_model(a.model);
    if (a.n_grid.empty()) throw UsageError("N grid is empty");
    std::ostringstream os;
    os << "N,lambda,dist,residual_max,oracle_rel_max\n";
    double worst = 0.0;
    for (int N : a.n_grid) {
        if (N < 1) throw UsageError("N must be >= 1");
        double lambda;
        DistCertificate cert;
        if (a.lambda) {
            lambda = *a.lambda;
            cert = dist_alpha(model, lambda);
        } else {
            MuSelection sel = select_mu(model, N);
            lambda = sel.mu;
            cert = sel.cert;
        }
        if (!(cert.dist > 0.0)) {
            auto [i, j] = cert.witness.value_or(std::make_pair(0, 0));
            throw ResonanceError("lambda = " + format_real(lambda) + " is resonant: witness pair (" +
                                     std::to_string(i) + ", " + std::to_string(j) + ")",
                                 i, j);
        }
        CauchySystem sys = make_cauchy_system(model, lambda, N, cert.dist);
        CMatrix c = build_cauchy(sys);
        CMatrix inv = explicit_inverse(sys);
        CMatrix oracle = oracle_inverse(c);
        double residual = max_abs(inv * c - CMatrix::Identity(N, N));
        double rel = 0.0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                double d = std::abs(inv(i, j) - oracle(i, j));
                double s = std::abs(oracle(i, j));
                rel = std::max(rel, s > 0.0 ? d / s : d);
            }
        worst = std::max(worst, residual);
        os << N << ',' << format_real(lambda) << ',' << format_real(cert.dist) << ',' << format_real(residual) << ','
           << format_real(rel) << '\n';
    }
    os << "# max residual_max=" << format_real(worst) << '\n';
    emit(a.out, os.str());
    return 0;
}

int cmd_synth(const SynthArgs& a) {
    SpectrumModel model = load_model(a.model);
    if (a.N < 1) throw UsageError("N must be >= 1");
    if (!(a.lambda > 0.0)) throw UsageError("lambda must be positive");
    DistCertificate cert = dist_alpha(model, a.lambda);
    if (cert.dist < a.min_dist) {
        auto [i, j] = cert.witness.value_or(std::make_pair(0, 0));
        throw ResonanceError("lambda = " + format_real(a.lambda) + " is within " + format_real(cert.dist) +
                                 " of resonance: witness pair (" + std::to_string(i) + ", " + std::to_string(j) + ")",
                             i, j);
    }
    BacksteppingSynthesis syn = assemble(model, a.lambda, a.N);
    emit(a.out, dump(synthesis_to_json(syn)));
    if (!a.matrices_dir.empty()) {
        std::filesystem::create_directories(a.matrices_dir);
        auto put = [&](const char* name, const CMatrix& m) {
            std::ostringstream os;
            write_matrix_csv(os, m);
            emit((std::filesystem::path(a.matrices_dir) / name).string(), os.str());
        };
        put("T.csv", syn.T);
        put("Tinv.csv", syn.Tinv);
        put("checkT.csv", syn.checkT);
        put("checkTinv.csv", syn.checkTinv);
    }
    return 0;
}

int cmd_cost_sweep(const CostSweepArgs& a) {
    SpectrumModel model = load_model(a.model);
    SweepOptions opt;
    opt.s_values = a.s_values;
    CostSweep sweep;
    if (!a.lambdas.empty()) {
        sweep = cost_sweep_lambdas(model, a.lambdas, a.trunc, opt);
    } else {
        if (a.n_to < a.n_from) throw UsageError("empty N range");
        std::vector<int> Ns;
        for (int N = a.n_from; N <= a.n_to; ++N) Ns.push_back(N);
        sweep = cost_sweep(model, Ns, a.trunc, opt);
    }
    std::ostringstream os;
    write_sweep_csv(os, model, sweep);
    emit(a.out, os.str());
    return 0;
}

int cmd_simulate(const SimulateArgs& a) {
    SpectrumModel model = load_model(a.model);
    if (!(a.lambda > 0.0)) throw UsageError("lambda must be positive");
    if (a.t_steps < 1 || !(a.t_end > 0.0)) throw UsageError("time grid needs t_end > 0 and t_steps >= 1");
    BacksteppingSynthesis syn = assemble(model, a.lambda, a.N);
    StateVector y0 = load_state(a.y0_file, a.y0_preset, a.N, a.seed);
    std::vector<double> grid;
    for (int i = 0; i <= a.t_steps; ++i) grid.push_back(a.t_end * i / a.t_steps);

    std::ostringstream os;
    os << "t,norm_H,norm_s,u\n";
    for (double t : grid) {
        StateVector y = propagate(syn, y0, t);
        Complex u = 0.0;
        for (int n = 0; n < syn.N; ++n) u += syn.k[n] * y.coeffs[n];
        os << format_real(t) << ',' << format_real(norm_H(y)) << ',' << format_real(norm_s(y, model, a.s)) << ','
           << format_real(std::abs(u)) << '\n';
    }
    DecayEstimate d = measure_decay(syn, y0, grid);
    os << "# lambda=" << format_real(syn.lambda) << " N=" << syn.N << " C_hat=" << format_real(d.C_hat)
       << " rate_hat=" << format_real(d.rate_hat) << " cond_T=" << format_real(*syn.norm_T * *syn.norm_Tinv) << '\n';
    emit(a.out, os.str());
    return 0;
}

int cmd_null_control(const NullControlArgs& a) {
    SpectrumModel model = load_model(a.model);
    NullControlSchedule schedule = build_schedule(model, a.horizon, a.gamma, a.sigma, a.stages, a.trunc_base);
    StateVector y0 = load_state(a.y0_file, a.y0_preset, schedule.dimension, a.seed);
    NullControlOptions opt;
    opt.epsilon = a.epsilon;
    opt.s = a.s;
    opt.samples_per_stage = a.samples;
    NullControlReport rep = run_null_control(schedule, y0, opt);
    std::ostringstream os;
    write_trajectory_csv(os, rep);
    emit(a.out, os.str());
    if (!a.manifest.empty()) emit(a.manifest, dump(schedule_to_json(schedule)));
    return 0;
}

}  // namespace backstep::cli
