#include "hdfts/longrun.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hdfts/errors.hpp"

namespace hdfts {

namespace {

void check_nu(double nu) {
    if (!(nu > 0.0) || !(nu < 1.0)) {
        throw ConfigError("kernel nu must lie in (0, 1), got " + std::to_string(nu));
    }
}

// Quadrature-weighted Frobenius norm of a covariance surface, the
// discrete analogue of the L2 surface norm.
double surface_norm(const Eigen::MatrixXd& c, const Eigen::VectorXd& w) {
    const Eigen::VectorXd sqrt_w = w.array().sqrt();
    return (sqrt_w.asDiagonal() * c * sqrt_w.asDiagonal()).norm();
}

}  // namespace

double flat_top_weight(double x, double nu) {
    check_nu(nu);
    const double a = std::abs(x);
    if (a < nu) {
        return 1.0;
    }
    if (a < 1.0) {
        return (a - 1.0) / (nu - 1.0);
    }
    return 0.0;
}

Eigen::MatrixXd lag_covariance(const Eigen::MatrixXd& centered, int lag) {
    const auto T = centered.rows();
    if (T < 2) {
        throw InsufficientData("lag covariance needs at least 2 periods, got " + std::to_string(T));
    }
    const int s = std::abs(lag);
    if (s > T - 2) {
        throw InsufficientData("lag " + std::to_string(lag) + " out of range for " +
                               std::to_string(T) + " periods (|lag| <= T - 2)");
    }
    const auto n = T - s;
    Eigen::MatrixXd c = centered.topRows(n).transpose() * centered.bottomRows(n) /
                        static_cast<double>(n);
    if (lag < 0) {
        return c.transpose();
    }
    return c;
}

Eigen::MatrixXd long_run_covariance(const Eigen::MatrixXd& centered, double nu, double bandwidth) {
    check_nu(nu);
    const auto T = centered.rows();
    if (T < 4) {
        throw InsufficientData("long-run covariance needs at least 4 periods, got " +
                               std::to_string(T));
    }
    if (!(bandwidth >= 1.0)) {
        throw ConfigError("bandwidth must be >= 1, got " + std::to_string(bandwidth));
    }
    const auto s_max = std::min<Eigen::Index>(
        static_cast<Eigen::Index>(std::ceil(bandwidth)) - 1, T - 2);

    Eigen::MatrixXd c = lag_covariance(centered, 0);
    for (Eigen::Index s = 1; s <= s_max; ++s) {
        const double w = flat_top_weight(static_cast<double>(s) / bandwidth, nu);
        if (w == 0.0) {
            continue;
        }
        const Eigen::MatrixXd cs = lag_covariance(centered, static_cast<int>(s));
        c.noalias() += w * (cs + cs.transpose());
    }
    return 0.5 * (c + c.transpose());
}

BandwidthSelection select_bandwidth(const Eigen::MatrixXd& centered, const Grid& grid, double nu) {
    check_nu(nu);
    const auto T = centered.rows();
    if (centered.cols() != static_cast<Eigen::Index>(grid.size())) {
        throw ConfigError("select_bandwidth: series has " + std::to_string(centered.cols()) +
                          " grid columns but grid has " + std::to_string(grid.size()) + " points");
    }
    if (T < 8) {
        return {2.0, true};
    }

    const int pilot = std::max(2, static_cast<int>(std::lround(std::pow(static_cast<double>(T), 0.2))));
    const int h_cap = static_cast<int>(std::min<Eigen::Index>(T - 2, 2 * pilot + 1));
    const int max_lag = static_cast<int>(std::min<Eigen::Index>(T - 2, std::max(20, 3 * pilot)));

    // Weighted norms of the lag covariances up to max_lag.
    std::vector<double> norms(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (int s = 0; s <= max_lag; ++s) {
        norms[static_cast<std::size_t>(s)] = surface_norm(lag_covariance(centered, s), grid.weights());
    }
    const double base = norms[0];
    if (!(base > 0.0)) {
        // Constant series: any bandwidth gives the zero surface.
        return {2.0, true};
    }

    // Keep only lags whose norm clears the sampling floor; the rest are
    // treated as zero in the bias proxy. For a serially independent series
    // Var[c_s(u,v)] ~ c_0(u,u)c_0(v,v)/(T-s), so the weighted norm of the
    // lag-s estimate concentrates near tr_w(c_0)/sqrt(T-s); lags below 1.5x
    // that level are indistinguishable from zero dependence.
    const double trace0 = grid.weights().dot(lag_covariance(centered, 0).diagonal());
    std::vector<double> kept(norms.size(), 0.0);
    for (std::size_t s = 1; s < norms.size(); ++s) {
        const double floor_s =
            1.5 * trace0 / std::sqrt(static_cast<double>(T) - static_cast<double>(s));
        if (norms[s] > floor_s) {
            kept[s] = norms[s];
        }
    }

    // One refinement step around the pilot: minimize a squared-bias plus
    // variance proxy over integer bandwidths up to roughly twice the pilot.
    int best_h = 1;
    double best_score = std::numeric_limits<double>::infinity();
    for (int h = 1; h <= h_cap; ++h) {
        double bias = 0.0;
        for (int s = 1; s <= max_lag; ++s) {
            const double w = flat_top_weight(static_cast<double>(s) / static_cast<double>(h), nu);
            bias += 2.0 * (1.0 - w) * kept[static_cast<std::size_t>(s)];
        }
        double weight_mass = 1.0;  // s = 0 term
        for (int s = 1; s < h; ++s) {
            const double w = flat_top_weight(static_cast<double>(s) / static_cast<double>(h), nu);
            weight_mass += 2.0 * w * w;
        }
        const double variance = base * base * weight_mass / static_cast<double>(T);
        const double score = bias * bias + variance;
        if (score < best_score) {
            best_score = score;
            best_h = h;
        }
    }
    return {static_cast<double>(best_h), false};
}

}  // namespace hdfts
