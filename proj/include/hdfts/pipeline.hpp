#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "hdfts/concurrent.hpp"
#include "hdfts/fpca.hpp"
#include "hdfts/front.hpp"
#include "hdfts/panel.hpp"
#include "hdfts/var.hpp"

namespace hdfts {

// Tunables of the two-fold factor model fit.
struct ModelConfig {
    double P = 0.9;              // cumulative-share threshold for component counts
    double nu = 0.5;             // flat-top kernel plateau
    double bandwidth = 0.0;      // long-run covariance bandwidth; 0 = adaptive per section
    double gamma = 0.0;          // roughness penalty of the concurrent regression
    bool use_gcv = false;        // pick gamma by generalized cross-validation
    int h0 = 1;                  // lag depth of the front-loading operator
    int max_order = 5;           // VAR order cap
    PadPolicy pad = PadPolicy::Zero;
    bool demean_common = false;  // demean factor curves before auto-cross-covariances
    int fixed_k = 0;             // force the back component count (0 = select)
    int fixed_r = 0;             // force the front component count (0 = select)
};

// Everything produced by one fit: stage outputs plus the VAR model on
// the projected factor matrices.
struct FittedModel {
    CenteredPanel centered;
    BackLoadingSet back;
    CommonFactorCurves common;
    FrontLoadings front;
    std::vector<Eigen::MatrixXd> factors;  // T matrices, each r x k
    VarModel var;
    ModelConfig config;
    double gamma_used = 0.0;
};

// Run the full estimation chain: center -> back loadings -> common
// curves -> front-loading operator -> front loadings -> factor
// projection -> VAR. Errors from a stage are rethrown with the stage
// name attached.
FittedModel fit_model(const FunctionalPanel& panel, const ModelConfig& config);

// Curves mu^(i)(u) + sum_{p,q} phi_p(u) F[p,q] lambda_q^(i)(u) for one
// factor matrix, one row per section.
Eigen::MatrixXd reconstruct_curves(const Eigen::MatrixXd& means, const Eigen::MatrixXd& front,
                                   const Eigen::MatrixXd& factors, const BackLoadingSet& loadings);

// In-sample reconstruction of the whole panel (N matrices, each T x J).
std::vector<Eigen::MatrixXd> fitted_values(const FittedModel& model);

// Point forecasts for horizons 1..h_max (N matrices, each h_max x J).
std::vector<Eigen::MatrixXd> forecast_curves(const FittedModel& model, int h_max);

struct ForecastBundle {
    Grid grid;
    std::vector<std::string> section_ids;
    std::vector<std::int64_t> period_ids;  // training periods
    int h_max = 0;
    std::vector<Eigen::MatrixXd> point;  // N matrices, each h_max x J
    // Empty for point-only bundles.
    std::vector<Eigen::MatrixXd> lower;
    std::vector<Eigen::MatrixXd> upper;
    double alpha = std::numeric_limits<double>::quiet_NaN();
    int n_resamples = 0;
    std::uint64_t seed = 0;
    // In-sample forecast errors per section and horizon; errors[i][h-1]
    // has one row per available origin.
    std::vector<std::vector<Eigen::MatrixXd>> insample_errors;
    std::vector<int> origin_counts;  // per horizon
    bool pooled_errors = false;      // horizons shared one error pool
};

// Point forecasts through the full chain.
ForecastBundle fit_and_forecast(const FunctionalPanel& panel, const ModelConfig& config, int h_max);

// Expanding-window refits: for each origin kappa = first_origin ..
// T-1 fit on the first kappa periods and forecast up to
// min(h_max, T - kappa) steps. forecasts[o][i] is the per-section
// matrix of that origin, one row per horizon.
struct ExpandingForecasts {
    std::size_t first_origin = 0;
    std::vector<std::vector<Eigen::MatrixXd>> forecasts;
    std::vector<int> selected_k;  // back count chosen at each origin
    std::vector<int> selected_r;  // front count chosen at each origin
};

ExpandingForecasts expanding_forecasts(const FunctionalPanel& panel, const ModelConfig& config,
                                       std::size_t first_origin, int h_max);

// Linear-interpolation percentile of a sorted sample: rank q*(n-1)
// interpolated between neighboring order statistics.
double percentile_sorted(const std::vector<double>& sorted, double q);

// Resampling core shared by the interval construction and its tests:
// draw B bootstrap curves point + e with e sampled per grid point from
// the error rows, and return the alpha/2 and 1-alpha/2 percentile
// curves. The RNG stream is derived from (seed, section, horizon, b).
std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd> bootstrap_percentiles(
    const Eigen::RowVectorXd& point, const Eigen::MatrixXd& errors, double alpha, int n_resamples,
    std::uint64_t seed, std::size_t section, int horizon);

// Bootstrap prediction intervals: in-sample errors are collected by
// expanding-window refits from origin max(10, T/2), resampled with
// replacement per (section, horizon, grid point). Horizons with fewer
// than 10 origins share one pooled error set per section (flagged).
ForecastBundle bootstrap_intervals(const FunctionalPanel& panel, const ModelConfig& config,
                                   int h_max, double alpha, int n_resamples, std::uint64_t seed);

}  // namespace hdfts
