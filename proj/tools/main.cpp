// backstep: command-line front end.
//
//   backstep <subcommand> [--config file.json] [flags]
//
// Config keys mirror the long flag names ("n-max" or "n_max"). Top-level keys
// apply to the chosen subcommand; an object under the subcommand's name holds
// keys for that subcommand only. Flags given on the command line win.

#include "commands.hpp"

#include "backstep/error.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

using namespace backstep;
using namespace backstep::cli;

namespace {

const std::set<std::string> kSubcommands{"spectrum-check", "cauchy-verify", "synth", "cost-sweep", "simulate",
                                         "null-control"};

std::string json_scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    throw UsageError("config values must be strings, numbers, booleans or arrays of those");
}

bool flag_given(const std::vector<std::string>& args, const std::string& name) {
    for (const std::string& a : args)
        if (a == "--" + name || a.rfind("--" + name + "=", 0) == 0) return true;
    return false;
}

void append_config(const nlohmann::json& obj, const std::vector<std::string>& explicit_args,
                   std::vector<std::string>& out) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        std::string key = it.key();
        if (kSubcommands.count(key)) continue;
        for (char& c : key)
            if (c == '_') c = '-';
        if (flag_given(explicit_args, key)) continue;
        const nlohmann::json& v = it.value();
        if (v.is_boolean()) {
            if (v.get<bool>()) out.push_back("--" + key);
        } else if (v.is_array()) {
            if (v.empty()) continue;
            out.push_back("--" + key);
            for (const auto& e : v) out.push_back(json_scalar(e));
        } else {
            out.push_back("--" + key);
            out.push_back(json_scalar(v));
        }
    }
}

// Rewrites argv so that config-file values come first and explicit flags
// (which CLI11 then sees last) take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config;
    std::vector<std::string> rest;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file");
            config = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (config.empty()) return rest;

    std::ifstream in(config);
    if (!in) throw UsageError("cannot open config file " + config);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config file " + config + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");

    auto sub = std::find_if(rest.begin(), rest.end(), [](const std::string& a) { return kSubcommands.count(a) > 0; });
    if (sub == rest.end()) throw UsageError("no subcommand given");
    std::vector<std::string> explicit_args(sub + 1, rest.end());
    std::vector<std::string> injected;
    append_config(j, explicit_args, injected);
    if (j.contains(*sub)) {
        if (!j[*sub].is_object()) throw UsageError("config entry '" + *sub + "' must be an object");
        append_config(j[*sub], explicit_args, injected);
    }
    std::vector<std::string> out(rest.begin(), sub + 1);
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), sub + 1, rest.end());
    return out;
}

void add_model(CLI::App* app, ModelArgs& m) {
    app->add_option("--model", m.model_file, "spectrum model JSON file (overrides the power law)");
    app->add_option("--kind", m.kind, "self_adjoint or skew_adjoint");
    app->add_option("--alpha", m.alpha, "eigenvalue growth order, > 1");
    app->add_option("--scale", m.scale, "a in lambda_n = -a n^alpha");
    app->add_option("--n-max", m.n_max, "number of materialized modes");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Explicit backstepping synthesis for diagonal spectral systems"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    SpectrumCheckArgs sc;
    auto* c_sc = app.add_subcommand("spectrum-check", "verify the gap conditions of a spectrum");
    add_model(c_sc, sc.model);
    c_sc->add_option("--n-check", sc.n_check, "number of eigenvalues scanned");
    c_sc->add_option("--out", sc.out, "report file (default stdout)");

    CauchyVerifyArgs cv;
    auto* c_cv = app.add_subcommand("cauchy-verify", "compare the explicit Cauchy inverse with elimination");
    add_model(c_cv, cv.model);
    c_cv->add_option("--n-grid", cv.n_grid, "truncation sizes")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    c_cv->add_option("--lambda", cv.lambda, "damping value (default: best candidate per N)");
    c_cv->add_option("--out", cv.out, "CSV file (default stdout)");

    SynthArgs sy;
    auto* c_sy = app.add_subcommand("synth", "assemble T, T^-1 and the gains");
    add_model(c_sy, sy.model);
    c_sy->add_option("--lambda", sy.lambda, "damping value")->required();
    c_sy->add_option("--N", sy.N, "truncation")->required();
    c_sy->add_option("--min-dist", sy.min_dist, "refuse damping values closer than this to resonance");
    c_sy->add_option("--out", sy.out, "JSON file (default stdout)");
    c_sy->add_option("--matrices-dir", sy.matrices_dir, "also write the matrices as CSV here");

    CostSweepArgs cs;
    auto* c_cs = app.add_subcommand("cost-sweep", "norms and gains along the certified damping sequence");
    add_model(c_cs, cs.model);
    c_cs->add_option("--n-from", cs.n_from, "first N");
    c_cs->add_option("--n-to", cs.n_to, "last N");
    c_cs->add_option("--lambdas", cs.lambdas, "explicit damping values instead of an N range")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    c_cs->add_option("--trunc", cs.trunc, "truncation of every synthesis");
    c_cs->add_option("--s-values", cs.s_values, "weights s for the D(A^s) norms")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    c_cs->add_option("--out", cs.out, "CSV file (default stdout)");

    SimulateArgs si;
    auto* c_si = app.add_subcommand("simulate", "closed-loop trajectory of one synthesis");
    add_model(c_si, si.model);
    c_si->add_option("--lambda", si.lambda, "damping value")->required();
    c_si->add_option("--N", si.N, "truncation");
    c_si->add_option("--y0", si.y0_file, "initial state JSON array");
    c_si->add_option("--y0-preset", si.y0_preset, "phi1, phi12, random or zero");
    c_si->add_option("--seed", si.seed, "seed for the random preset");
    c_si->add_option("--t-end", si.t_end, "final time");
    c_si->add_option("--t-steps", si.t_steps, "number of time steps");
    c_si->add_option("--s", si.s, "weight of the D(A^s) norm column");
    c_si->add_option("--out", si.out, "CSV file (default stdout)");

    NullControlArgs nc;
    auto* c_nc = app.add_subcommand("null-control", "piecewise feedback schedule driving the state to zero");
    add_model(c_nc, nc.model);
    c_nc->add_option("--gamma", nc.gamma, "growth exponent of the damping values");
    c_nc->add_option("--sigma", nc.sigma, "exponent of the stage lengths");
    c_nc->add_option("--horizon", nc.horizon, "final time");
    c_nc->add_option("--stages", nc.stages, "number of stages");
    c_nc->add_option("--trunc-base", nc.trunc_base, "minimum truncation");
    c_nc->add_option("--y0", nc.y0_file, "initial state JSON array");
    c_nc->add_option("--y0-preset", nc.y0_preset, "phi1, phi12, random or zero");
    c_nc->add_option("--seed", nc.seed, "seed for the random preset");
    c_nc->add_option("--epsilon", nc.epsilon, "target for the final norm ratio");
    c_nc->add_option("--s", nc.s, "weight of the D(A^s) norm column");
    c_nc->add_option("--samples", nc.samples, "trajectory samples per stage");
    c_nc->add_option("--out", nc.out, "trajectory CSV (default stdout)");
    c_nc->add_option("--manifest", nc.manifest, "schedule manifest JSON");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*c_sc) return cmd_spectrum_check(sc);
        if (*c_cv) return cmd_cauchy_verify(cv);
        if (*c_sy) return cmd_synth(sy);
        if (*c_cs) return cmd_cost_sweep(cs);
        if (*c_si) return cmd_simulate(si);
        if (*c_nc) return cmd_null_control(nc);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const GuardError& e) {
        std::cerr << "guard: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
