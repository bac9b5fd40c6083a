#pragma once

#include "backstep/linalg.hpp"
#include "backstep/spectrum.hpp"
#include "backstep/transform.hpp"
#include "backstep/types.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace backstep {

struct WideSynthesis;

// Coordinates <y, phi_n>.
struct StateVector {
    std::vector<Complex> coeffs;
    std::optional<double> s_weight;
};

StateVector basis_state(int n, int N);
double norm_H(const StateVector& y);
// sqrt(sum |lambda_n|^(2s) |y_n|^2)
double norm_s(const StateVector& y, const SpectrumModel& model, double s);

StateVector propagate(const BacksteppingSynthesis& syn, const StateVector& y0, double t);
Complex control_signal(const BacksteppingSynthesis& syn, const StateVector& y0, double t);

struct DecayEstimate {
    double C_hat = 0.0;     // max over the grid of e^(lambda t) |y(t)| / |y0|
    double rate_hat = 0.0;  // OLS slope of log|y(t)| over the second half of the grid
};

DecayEstimate measure_decay(const BacksteppingSynthesis& syn, const StateVector& y0, const std::vector<double>& t_grid);

struct NullControlStage {
    int N = 0;
    long target = 0;          // ceil(N^gamma), the integer handed to select_mu
    double lambda = 0.0;
    double dist = 0.0;
    double delta = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    int required_trunc = 0;   // max(base, 4 ceil(lambda^(1/alpha)))
    std::shared_ptr<const WideSynthesis> synthesis;
};

struct NullControlSchedule {
    std::shared_ptr<const SpectrumModel> model;
    double horizon = 0.0;
    double gamma = 0.0;
    double sigma = 0.0;
    double L_sigma = 0.0;
    double tail_remainder = 0.0;  // integral bound on the unscheduled part of L_sigma
    double offset_bound = 0.0;    // max over stages of lambda_N - N^gamma
    int dimension = 0;            // common truncation of every stage
    std::vector<NullControlStage> stages;
};

// gamma > sigma > alpha/(alpha-1). All stages share one truncation, the
// largest per-stage requirement, so the state never changes dimension.
NullControlSchedule build_schedule(const SpectrumModel& model, double horizon, double gamma, double sigma,
                                   int n_stages, int trunc_base);

struct StageRecord {
    int N = 0;
    double lambda = 0.0;
    double delta = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    double norm_H_end = 0.0;
    double norm_s_end = 0.0;
    double max_u = 0.0;
    double log_growth = 0.0;           // log(|y(t_end)| / |y(t_start)|)
    double certified_log_factor = 0.0; // log(|T| |Tinv|) - lambda delta, exact at truncation
    double contraction_exponent = 0.0; // c lambda^(1/alpha) - lambda delta with the fitted c
};

struct TrajectorySample {
    double t = 0.0;
    double norm_H = 0.0;
    double norm_s = 0.0;
    double u = 0.0;  // |u(t)|
};

struct NullControlOptions {
    double s = 0.25;
    double epsilon = 1e-6;
    int samples_per_stage = 16;
};

struct NullControlReport {
    std::vector<StageRecord> stages;
    std::vector<TrajectorySample> trajectory;
    double norm0 = 0.0;
    double final_ratio = 0.0;
    double epsilon = 0.0;
    bool reached = false;
    // log(|T||Tinv|) ~ log C + c lambda^(1/alpha) fitted over the stages
    double cost_rate = 0.0;
    double cost_log_offset = 0.0;
};

NullControlReport run_null_control(const NullControlSchedule& schedule, const StateVector& y0,
                                   const NullControlOptions& opt = {});

}  // namespace backstep
