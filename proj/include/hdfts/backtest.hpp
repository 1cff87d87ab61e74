#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hdfts/panel.hpp"
#include "hdfts/pipeline.hpp"

namespace hdfts {

// Expanding-window evaluation protocol: refit on the first kappa
// periods for kappa = n0 .. T-1 and score forecasts 1..h_max steps
// ahead against the held-out curves.
struct EvalConfig {
    std::size_t n0 = 0;  // 0 = default floor(3T/4)
    int h_max = 5;
    bool with_intervals = false;
    double alpha = 0.2;
    int n_resamples = 1000;
    std::uint64_t seed = 1;
};

struct EvalReport {
    std::vector<std::string> section_ids;
    std::size_t n0 = 0;
    std::vector<int> horizons;
    std::vector<int> forecast_counts;        // per horizon: T - n0 - h + 1
    std::vector<double> mean_rmsfe;          // cross-section mean of per-section RMSFE
    std::vector<double> pooled_rmsfe;        // pooled aggregation over sections
    Eigen::MatrixXd per_section_rmsfe;       // N x H
    std::vector<double> mean_interval_score; // per horizon; empty without intervals
    Eigen::MatrixXd per_section_score;       // N x H; 0 x 0 without intervals
    double alpha = 0.2;
};

EvalReport expanding_window_eval(const FunctionalPanel& panel, const ModelConfig& model,
                                 const EvalConfig& eval);

// Monte Carlo study over simulated panels: per replication, simulate,
// fit, record the fitting RMSE and selected component counts, and
// optionally run the expanding-window point-forecast protocol.
struct StudyConfig {
    int n_sections = 10;
    int n_periods = 20;
    int reps = 100;
    std::uint64_t seed = 1;
    double noise_sd = 0.5;
    int burn_in = 100;
    bool stable_row2 = false;
    bool with_forecast = false;
    int h_max = 5;
    std::size_t n0 = 0;  // 0 = default floor(3T/4)
    ModelConfig model;
};

struct StudyReport {
    StudyConfig config;
    double mean_rmse = 0.0;
    double se_rmse = 0.0;  // Monte Carlo standard error of the mean
    // Same fit measured against the noiseless signal curves.
    double mean_rmse_signal = 0.0;
    double se_rmse_signal = 0.0;
    double p_k2 = 0.0;  // proportion of replications with k_hat = 2
    double p_r2 = 0.0;
    double p_r23 = 0.0;  // r_hat in {2, 3}
    std::vector<double> mean_rmsfe;  // per horizon; empty without forecasts
    std::vector<double> se_rmsfe;
    // Raw per-replication records.
    std::vector<double> rep_rmse;
    std::vector<double> rep_rmse_signal;
    std::vector<int> rep_k;
    std::vector<int> rep_r;
    std::vector<std::vector<double>> rep_rmsfe;  // [rep][h-1]
};

StudyReport monte_carlo_study(const StudyConfig& config);

}  // namespace hdfts
