#pragma once

#include <Eigen/Dense>
#include <vector>

namespace hdfts {

// Root mean squared error over all N * T * J entries of a fitted panel.
double rmse_fit(const std::vector<Eigen::MatrixXd>& actual,
                const std::vector<Eigen::MatrixXd>& fitted);

// Forecast errors at one horizon: actuals[o] and forecasts[o] are N x J
// matrices aligned over expanding-window origins.
//
// rmsfe_by_section: per-section root mean over origins and grid points.
// rmsfe_mean_of_sections: the cross-section average of those values.
// rmsfe_pooled: one root over the pooled mean across sections, origins
// and grid points (the simulation-study aggregation).
Eigen::VectorXd rmsfe_by_section(const std::vector<Eigen::MatrixXd>& actuals,
                                 const std::vector<Eigen::MatrixXd>& forecasts);
double rmsfe_mean_of_sections(const std::vector<Eigen::MatrixXd>& actuals,
                              const std::vector<Eigen::MatrixXd>& forecasts);
double rmsfe_pooled(const std::vector<Eigen::MatrixXd>& actuals,
                    const std::vector<Eigen::MatrixXd>& forecasts);

// Interval score at level alpha: width plus (2/alpha) times the distance
// by which the actual value escapes the interval.
double interval_score(double lower, double upper, double actual, double alpha);

}  // namespace hdfts
