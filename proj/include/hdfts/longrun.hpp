#pragma once

#include <Eigen/Dense>

#include "hdfts/grid.hpp"

namespace hdfts {

// Flat-top lag window: 1 on [0, nu), decays linearly to 0 at 1, and is 0
// beyond. Even in x. Requires 0 < nu < 1.
double flat_top_weight(double x, double nu);

// Empirical lag-s autocovariance surface of a single centered functional
// series (T x J, rows are curves): for s >= 0,
//   c_s(u, v) = (1 / (T - s)) * sum_{t=1}^{T-s} y_t(u) y_{t+s}(v),
// and c_{-s}(u, v) = c_s(v, u). Requires |s| <= T - 2.
Eigen::MatrixXd lag_covariance(const Eigen::MatrixXd& centered, int lag);

// Kernel-weighted long-run covariance
//   c(u, v) = sum_s W(s / H) c_s(u, v)
// over all lags with |s| <= min(ceil(H) - 1, T - 2). The result is
// explicitly symmetrized. Requires T >= 4, H >= 1.
Eigen::MatrixXd long_run_covariance(const Eigen::MatrixXd& centered, double nu, double bandwidth);

struct BandwidthSelection {
    double bandwidth = 2.0;
    // True when the series was too short for adaptive selection and the
    // small-sample default was used instead.
    bool fallback = false;
};

// Plug-in bandwidth for the flat-top window. Lag covariance norms that
// clear a noise threshold drive a bias-variance proxy which is minimized
// over integer candidates; deterministic in the input. Series with
// T < 8 fall back to H = 2.
BandwidthSelection select_bandwidth(const Eigen::MatrixXd& centered, const Grid& grid, double nu);

}  // namespace hdfts
