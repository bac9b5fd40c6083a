#pragma once

#include <optional>
#include <string>
#include <vector>

namespace backstep::cli {

struct ModelArgs {
    std::string model_file;
    std::string kind = "self_adjoint";
    double alpha = 2.0;
    double scale = 1.0;
    int n_max = 512;
};

struct SpectrumCheckArgs {
    ModelArgs model;
    int n_check = 0;  // 0: min(n_max, 200)
    std::string out;
};

struct CauchyVerifyArgs {
    ModelArgs model;
    std::vector<int> n_grid{2, 4, 8, 16, 32, 64};
    std::optional<double> lambda;
    std::string out;
};

struct SynthArgs {
    ModelArgs model;
    double lambda = 0.0;
    int N = 0;
    double min_dist = 1e-6;
    std::string out;
    std::string matrices_dir;
};

struct CostSweepArgs {
    ModelArgs model;
    int n_from = 1;
    int n_to = 25;
    std::vector<double> lambdas;
    int trunc = 300;
    std::vector<double> s_values{0.25, 0.45};
    std::string out;
};

struct SimulateArgs {
    ModelArgs model;
    double lambda = 0.0;
    int N = 32;
    std::string y0_file;
    std::string y0_preset = "phi1";
    unsigned long long seed = 1;
    double t_end = 10.0;
    int t_steps = 100;
    double s = 0.25;
    std::string out;
};

struct NullControlArgs {
    ModelArgs model;
    double gamma = 3.0;
    double sigma = 2.5;
    double horizon = 1.0;
    int stages = 6;
    int trunc_base = 16;
    std::string y0_file;
    std::string y0_preset = "phi12";
    unsigned long long seed = 1;
    double epsilon = 1e-6;
    double s = 0.25;
    int samples = 16;
    std::string out;
    std::string manifest;
};

int cmd_spectrum_check(const SpectrumCheckArgs& a);
int cmd_cauchy_verify(const CauchyVerifyArgs& a);
int cmd_synth(const SynthArgs& a);
int cmd_cost_sweep(const CostSweepArgs& a);
int cmd_simulate(const SimulateArgs& a);
int cmd_null_control(const NullControlArgs& a);

}  // namespace backstep::cli
