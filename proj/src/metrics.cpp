#include "hdfts/metrics.hpp"

#include <cmath>
#include <string>

#include "hdfts/errors.hpp"

namespace hdfts {

namespace {

void check_aligned(const std::vector<Eigen::MatrixXd>& a, const std::vector<Eigen::MatrixXd>& b,
                   const char* what) {
    if (a.size() != b.size() || a.empty()) {
        throw ConfigError(std::string(what) + ": mismatched or empty inputs (" +
                          std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols()) {
            throw ConfigError(std::string(what) + ": shape mismatch at index " + std::to_string(i));
        }
    }
}

}  // namespace

double rmse_fit(const std::vector<Eigen::MatrixXd>& actual,
                const std::vector<Eigen::MatrixXd>& fitted) {
    check_aligned(actual, fitted, "rmse_fit");
    double sum = 0.0;
    double count = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        sum += (actual[i] - fitted[i]).squaredNorm();
        count += static_cast<double>(actual[i].size());
    }
    return std::sqrt(sum / count);
}

Eigen::VectorXd rmsfe_by_section(const std::vector<Eigen::MatrixXd>& actuals,
                                 const std::vector<Eigen::MatrixXd>& forecasts) {
    check_aligned(actuals, forecasts, "rmsfe");
    const auto n_origins = actuals.size();
    const auto N = actuals.front().rows();
    Eigen::VectorXd out(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        double sum = 0.0;
        double count = 0.0;
        for (std::size_t o = 0; o < n_origins; ++o) {
            sum += (actuals[o].row(i) - forecasts[o].row(i)).squaredNorm();
            count += static_cast<double>(actuals[o].cols());
        }
        out[i] = std::sqrt(sum / count);
    }
    return out;
}

double rmsfe_mean_of_sections(const std::vector<Eigen::MatrixXd>& actuals,
                              const std::vector<Eigen::MatrixXd>& forecasts) {
    return rmsfe_by_section(actuals, forecasts).mean();
}

double rmsfe_pooled(const std::vector<Eigen::MatrixXd>& actuals,
                    const std::vector<Eigen::MatrixXd>& forecasts) {
    check_aligned(actuals, forecasts, "rmsfe");
    double sum = 0.0;
    double count = 0.0;
    for (std::size_t o = 0; o < actuals.size(); ++o) {
        sum += (actuals[o] - forecasts[o]).squaredNorm();
        count += static_cast<double>(actuals[o].size());
    }
    return std::sqrt(sum / count);
}

double interval_score(double lower, double upper, double actual, double alpha) {
    if (lower > upper) {
        throw ConfigError("interval_score: lower bound exceeds upper bound");
    }
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw ConfigError("interval_score: alpha must lie in (0, 1)");
    }
    double score = upper - lower;
    if (actual < lower) {
        score += 2.0 / alpha * (lower - actual);
    }
    if (actual > upper) {
        score += 2.0 / alpha * (actual - upper);
    }
    return score;
}

}  // namespace hdfts
