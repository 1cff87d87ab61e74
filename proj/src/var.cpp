#include "hdfts/var.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hdfts/errors.hpp"

namespace hdfts {

namespace {

struct LsFit {
    Eigen::MatrixXd coeffs;   // (1 + d*p) x d
    Eigen::MatrixXd sigma;    // d x d MLE residual covariance
    double aic = std::numeric_limits<double>::infinity();
    bool valid = false;
};

// Least-squares VAR(p) on observations [start, T), conditioning on the
// p values before each target. n_obs = T - start.
LsFit fit_order(const std::vector<Eigen::VectorXd>& series, int p, std::size_t start) {
    const auto d = series.front().size();
    const auto T = series.size();
    const auto n = static_cast<Eigen::Index>(T - start);
    const Eigen::Index n_reg = 1 + static_cast<Eigen::Index>(p) * d;

    LsFit fit;
    if (n - n_reg < d) {
        return fit;  // residual degrees of freedom too small for a full-rank covariance
    }
    Eigen::MatrixXd y(n, d);
    Eigen::MatrixXd z(n, n_reg);
    for (Eigen::Index row = 0; row < n; ++row) {
        const std::size_t t = start + static_cast<std::size_t>(row);
        y.row(row) = series[t].transpose();
        z(row, 0) = 1.0;
        for (int l = 1; l <= p; ++l) {
            z.block(row, 1 + static_cast<Eigen::Index>(l - 1) * d, 1, d) =
                series[t - static_cast<std::size_t>(l)].transpose();
        }
    }
    fit.coeffs = z.colPivHouseholderQr().solve(y);
    const Eigen::MatrixXd resid = y - z * fit.coeffs;
    fit.sigma = resid.transpose() * resid / static_cast<double>(n);
    fit.sigma = 0.5 * (fit.sigma + fit.sigma.transpose());

    const Eigen::LLT<Eigen::MatrixXd> llt(fit.sigma);
    if (llt.info() != Eigen::Success) {
        return fit;  // singular residual covariance; candidate unusable
    }
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        log_det += 2.0 * std::log(llt.matrixL()(i, i));
    }
    const double n_params = static_cast<double>(d * n_reg) +
                            static_cast<double>(d) * static_cast<double>(d + 1) / 2.0;
    const double log_lik = -0.5 * static_cast<double>(n) *
                           (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + log_det +
                            static_cast<double>(d));
    fit.aic = -2.0 * log_lik + 2.0 * n_params;
    fit.valid = true;
    return fit;
}

// Ridge-stabilized VAR(1): always produces a usable forecaster, even on
// degenerate inputs (zero-variance factors, T too small for an AIC
// comparison). The ridge is relative to the regressor scale, so ordinary
// data is essentially unaffected.
VarModel ridge_var1(const std::vector<Eigen::VectorXd>& series) {
    const auto d = series.front().size();
    const auto T = static_cast<int>(series.size());
    const Eigen::Index n = T - 1;
    const Eigen::Index n_reg = 1 + d;
    Eigen::MatrixXd y(n, d);
    Eigen::MatrixXd z(n, n_reg);
    for (Eigen::Index row = 0; row < n; ++row) {
        y.row(row) = series[static_cast<std::size_t>(row) + 1].transpose();
        z(row, 0) = 1.0;
        z.block(row, 1, 1, d) = series[static_cast<std::size_t>(row)].transpose();
    }
    Eigen::MatrixXd gram = z.transpose() * z;
    const double ridge = 1e-8 * (1.0 + gram.trace() / static_cast<double>(n_reg));
    gram.diagonal().array() += ridge;
    const Eigen::MatrixXd coeffs = gram.ldlt().solve(z.transpose() * y);
    const Eigen::MatrixXd resid = y - z * coeffs;
    VarModel model;
    model.order = 1;
    model.order_capped = true;
    model.intercept = coeffs.row(0).transpose();
    model.coeffs.push_back(coeffs.block(1, 0, d, d).transpose());
    model.innovation_cov = resid.transpose() * resid / static_cast<double>(n);
    model.aic = std::numeric_limits<double>::quiet_NaN();
    return model;
}

}  // namespace

Eigen::VectorXd vectorize_factor(const Eigen::MatrixXd& f) {
    return Eigen::Map<const Eigen::VectorXd>(f.data(), f.size());
}

Eigen::MatrixXd reshape_factor(const Eigen::VectorXd& v, int r, int k) {
    if (v.size() != static_cast<Eigen::Index>(r) * k) {
        throw ConfigError("cannot reshape vector of length " + std::to_string(v.size()) + " to " +
                          std::to_string(r) + "x" + std::to_string(k));
    }
    return Eigen::Map<const Eigen::MatrixXd>(v.data(), r, k);
}

VarModel fit_var(const std::vector<Eigen::VectorXd>& series, int max_order) {
    if (max_order < 1) {
        throw ConfigError("max_order must be >= 1");
    }
    if (series.size() < 3) {
        throw InsufficientData("VAR needs at least 3 observations, got " +
                               std::to_string(series.size()));
    }
    const auto d = series.front().size();
    for (const auto& v : series) {
        if (v.size() != d) {
            throw ConfigError("factor vectors have inconsistent dimensions");
        }
    }
    const auto T = static_cast<int>(series.size());

    // Largest order whose own-sample fit leaves at least d residual
    // degrees of freedom.
    int p_cap = 0;
    for (int p = 1; p <= max_order; ++p) {
        if (T - p - (static_cast<int>(d) * p + 1) >= static_cast<int>(d)) {
            p_cap = p;
        }
    }
    if (p_cap == 0) {
        // Dimension too large for an AIC comparison with a full-rank
        // residual covariance: least-squares forecaster with no order search.
        return ridge_var1(series);
    }

    // Compare candidate orders on the common sample left by the largest
    // candidate, so their likelihoods are comparable.
    const auto start = static_cast<std::size_t>(p_cap);
    int best_p = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= p_cap; ++p) {
        const LsFit fit = fit_order(series, p, start);
        if (fit.valid && fit.aic < best_aic) {
            best_aic = fit.aic;
            best_p = p;
        }
    }
    if (best_p == 0) {
        // Every candidate left a singular residual covariance (e.g. the
        // factors are constant or collinear); degrade to the stabilized fit.
        return ridge_var1(series);
    }

    // Refit the winner on its full sample.
    const LsFit fit = fit_order(series, best_p, static_cast<std::size_t>(best_p));
    if (!fit.valid) {
        return ridge_var1(series);
    }
    VarModel model;
    model.order = best_p;
    model.order_capped = p_cap < max_order;
    model.intercept = fit.coeffs.row(0).transpose();
    model.coeffs.reserve(static_cast<std::size_t>(best_p));
    for (int l = 0; l < best_p; ++l) {
        model.coeffs.push_back(
            fit.coeffs.block(1 + static_cast<Eigen::Index>(l) * d, 0, d, d).transpose());
    }
    model.innovation_cov = fit.sigma;
    model.aic = fit.aic;
    return model;
}

VarModel fit_var_matrices(const std::vector<Eigen::MatrixXd>& factors, int max_order) {
    if (factors.empty()) {
        throw ConfigError("factor series is empty");
    }
    std::vector<Eigen::VectorXd> series;
    series.reserve(factors.size());
    for (const auto& f : factors) {
        if (f.rows() != factors.front().rows() || f.cols() != factors.front().cols()) {
            throw ConfigError("factor matrices have inconsistent shapes");
        }
        series.push_back(vectorize_factor(f));
    }
    return fit_var(series, max_order);
}

std::vector<Eigen::VectorXd> forecast_factors(const VarModel& model,
                                              const std::vector<Eigen::VectorXd>& history, int h) {
    if (h < 1) {
        throw ConfigError("forecast horizon must be >= 1");
    }
    if (history.size() < static_cast<std::size_t>(model.order)) {
        throw ConfigError("history holds " + std::to_string(history.size()) +
                          " values but the model has order " + std::to_string(model.order));
    }
    const auto d = model.intercept.size();
    for (const auto& v : history) {
        if (v.size() != d) {
            throw ConfigError("history vectors do not match the model dimension");
        }
    }
    std::vector<Eigen::VectorXd> extended(history.end() - model.order, history.end());
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(h));
    for (int step = 0; step < h; ++step) {
        Eigen::VectorXd next = model.intercept;
        for (int l = 1; l <= model.order; ++l) {
            next.noalias() += model.coeffs[static_cast<std::size_t>(l - 1)] *
                              extended[extended.size() - static_cast<std::size_t>(l)];
        }
        extended.push_back(next);
        out.push_back(std::move(next));
    }
    return out;
}

}  // namespace hdfts
