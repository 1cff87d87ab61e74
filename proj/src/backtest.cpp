#include "hdfts/backtest.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <utility>

#include "hdfts/dgp.hpp"
#include "hdfts/errors.hpp"
#include "hdfts/metrics.hpp"
#include "hdfts/parallel.hpp"
#include "hdfts/rng.hpp"

namespace hdfts {

namespace {

constexpr std::uint64_t kOriginTag = 5;

std::size_t default_n0(std::size_t T) { return 3 * T / 4; }

}  // namespace

EvalReport expanding_window_eval(const FunctionalPanel& panel, const ModelConfig& model,
                                 const EvalConfig& eval) {
    panel.validate();
    const auto T = panel.n_periods();
    const auto N = panel.n_sections();
    const std::size_t n0 = eval.n0 > 0 ? eval.n0 : default_n0(T);
    if (eval.h_max < 1) {
        throw ConfigError("h_max must be >= 1");
    }
    if (n0 + static_cast<std::size_t>(eval.h_max) > T) {
        throw ConfigError("n0 + h_max must not exceed T (" + std::to_string(n0) + " + " +
                          std::to_string(eval.h_max) + " > " + std::to_string(T) + ")");
    }

    const ExpandingForecasts expanding = expanding_forecasts(panel, model, n0, eval.h_max);

    EvalReport report;
    report.section_ids = panel.section_ids;
    report.n0 = n0;
    report.alpha = eval.alpha;
    report.per_section_rmsfe.resize(static_cast<Eigen::Index>(N), eval.h_max);
    for (int h = 1; h <= eval.h_max; ++h) {
        const auto count = T - n0 - static_cast<std::size_t>(h) + 1;
        report.horizons.push_back(h);
        report.forecast_counts.push_back(static_cast<int>(count));
        std::vector<Eigen::MatrixXd> actuals;
        std::vector<Eigen::MatrixXd> forecasts;
        actuals.reserve(count);
        forecasts.reserve(count);
        for (std::size_t o = 0; o < count; ++o) {
            const std::size_t target = n0 + o + static_cast<std::size_t>(h) - 1;
            Eigen::MatrixXd actual(static_cast<Eigen::Index>(N),
                                   static_cast<Eigen::Index>(panel.n_points()));
            Eigen::MatrixXd forecast(actual.rows(), actual.cols());
            for (std::size_t i = 0; i < N; ++i) {
                actual.row(static_cast<Eigen::Index>(i)) =
                    panel.values[i].row(static_cast<Eigen::Index>(target));
                forecast.row(static_cast<Eigen::Index>(i)) = expanding.forecasts[o][i].row(h - 1);
            }
            actuals.push_back(std::move(actual));
            forecasts.push_back(std::move(forecast));
        }
        report.per_section_rmsfe.col(h - 1) = rmsfe_by_section(actuals, forecasts);
        report.mean_rmsfe.push_back(report.per_section_rmsfe.col(h - 1).mean());
        report.pooled_rmsfe.push_back(rmsfe_pooled(actuals, forecasts));
    }

    if (eval.with_intervals) {
        const auto J = panel.n_points();
        report.per_section_score =
            Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), eval.h_max);
        Eigen::MatrixXd cell_counts =
            Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), eval.h_max);
        for (std::size_t kappa = n0; kappa < T; ++kappa) {
            const int h_here = std::min<int>(eval.h_max, static_cast<int>(T - kappa));
            const ForecastBundle bundle = bootstrap_intervals(
                truncate_periods(panel, kappa), model, h_here, eval.alpha, eval.n_resamples,
                rng::derive(eval.seed, {kOriginTag, static_cast<std::uint64_t>(kappa)}));
            for (std::size_t i = 0; i < N; ++i) {
                for (int h = 1; h <= h_here; ++h) {
                    const auto target = static_cast<Eigen::Index>(kappa) + h - 1;
                    double sum = 0.0;
                    for (std::size_t j = 0; j < J; ++j) {
                        const auto jj = static_cast<Eigen::Index>(j);
                        sum += interval_score(bundle.lower[i](h - 1, jj), bundle.upper[i](h - 1, jj),
                                              panel.values[i](target, jj), eval.alpha);
                    }
                    report.per_section_score(static_cast<Eigen::Index>(i), h - 1) += sum;
                    cell_counts(static_cast<Eigen::Index>(i), h - 1) += static_cast<double>(J);
                }
            }
        }
        report.per_section_score.array() /= cell_counts.array();
        for (int h = 1; h <= eval.h_max; ++h) {
            report.mean_interval_score.push_back(report.per_section_score.col(h - 1).mean());
        }
    }
    return report;
}

StudyReport monte_carlo_study(const StudyConfig& config) {
    if (config.reps < 1) {
        throw ConfigError("study needs at least 1 replication");
    }
    const auto T = static_cast<std::size_t>(config.n_periods);
    const std::size_t n0 = config.n0 > 0 ? config.n0 : default_n0(T);
    const int h_max = config.with_forecast
                          ? std::min<int>(config.h_max, static_cast<int>(T - n0))
                          : config.h_max;
    if (config.with_forecast && h_max < 1) {
        throw ConfigError("no forecast horizons fit between n0 and T");
    }

    StudyReport report;
    report.config = config;
    report.config.n0 = n0;
    const auto reps = static_cast<std::size_t>(config.reps);
    report.rep_rmse.assign(reps, 0.0);
    report.rep_rmse_signal.assign(reps, 0.0);
    report.rep_k.assign(reps, 0);
    report.rep_r.assign(reps, 0);
    report.rep_rmsfe.assign(reps, {});

    parallel_for(reps, [&](std::size_t rep) {
        DgpConfig dgp;
        dgp.n_sections = config.n_sections;
        dgp.n_periods = config.n_periods;
        dgp.noise_sd = config.noise_sd;
        dgp.burn_in = config.burn_in;
        dgp.stable_row2 = config.stable_row2;
        dgp.seed = rng::derive(config.seed, {rng::kReplication, static_cast<std::uint64_t>(rep)});
        const SimulatedPanel sim = simulate_dgp(dgp);

        const FittedModel fit = fit_model(sim.panel, config.model);
        const std::vector<Eigen::MatrixXd> fitted = fitted_values(fit);
        report.rep_rmse[rep] = rmse_fit(sim.panel.values, fitted);

        // Noiseless signal curves rebuilt from the simulation truth.
        std::vector<Eigen::MatrixXd> signal(sim.panel.values.size());
        for (std::size_t i = 0; i < signal.size(); ++i) {
            Eigen::MatrixXd s(sim.panel.values[i].rows(), sim.panel.values[i].cols());
            for (std::size_t t = 0; t < sim.truth.factors.size(); ++t) {
                const Eigen::MatrixXd g = sim.truth.front.transpose() * sim.truth.factors[t];
                s.row(static_cast<Eigen::Index>(t)) =
                    (sim.truth.back[i].array() * g.transpose().array()).colwise().sum();
            }
            signal[i] = std::move(s);
        }
        report.rep_rmse_signal[rep] = rmse_fit(signal, fitted);
        report.rep_k[rep] = fit.back.k;
        report.rep_r[rep] = fit.front.r;

        if (config.with_forecast) {
            const ExpandingForecasts expanding =
                expanding_forecasts(sim.panel, config.model, n0, h_max);
            std::vector<double> rmsfe(static_cast<std::size_t>(h_max));
            const auto N = sim.panel.n_sections();
            const auto J = static_cast<Eigen::Index>(sim.panel.n_points());
            for (int h = 1; h <= h_max; ++h) {
                const std::size_t count = T - n0 - static_cast<std::size_t>(h) + 1;
                std::vector<Eigen::MatrixXd> actuals;
                std::vector<Eigen::MatrixXd> forecasts;
                for (std::size_t o = 0; o < count; ++o) {
                    const auto target = static_cast<Eigen::Index>(n0 + o) + h - 1;
                    Eigen::MatrixXd actual(static_cast<Eigen::Index>(N), J);
                    Eigen::MatrixXd forecast(static_cast<Eigen::Index>(N), J);
                    for (std::size_t i = 0; i < N; ++i) {
                        actual.row(static_cast<Eigen::Index>(i)) = sim.panel.values[i].row(target);
                        forecast.row(static_cast<Eigen::Index>(i)) =
                            expanding.forecasts[o][i].row(h - 1);
                    }
                    actuals.push_back(std::move(actual));
                    forecasts.push_back(std::move(forecast));
                }
                rmsfe[static_cast<std::size_t>(h - 1)] = rmsfe_pooled(actuals, forecasts);
            }
            report.rep_rmsfe[rep] = std::move(rmsfe);
        }
    });

    const auto n = static_cast<double>(reps);
    const auto mean_se = [n, reps](const std::vector<double>& xs) {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (double x : xs) {
            sum += x;
            sum_sq += x * x;
        }
        const double var = reps > 1 ? (sum_sq - sum * sum / n) / (n - 1.0) : 0.0;
        return std::pair<double, double>(sum / n, std::sqrt(std::max(0.0, var) / n));
    };
    int hits_k2 = 0;
    int hits_r2 = 0;
    int hits_r23 = 0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        hits_k2 += report.rep_k[rep] == 2 ? 1 : 0;
        hits_r2 += report.rep_r[rep] == 2 ? 1 : 0;
        hits_r23 += (report.rep_r[rep] == 2 || report.rep_r[rep] == 3) ? 1 : 0;
    }
    std::tie(report.mean_rmse, report.se_rmse) = mean_se(report.rep_rmse);
    std::tie(report.mean_rmse_signal, report.se_rmse_signal) = mean_se(report.rep_rmse_signal);
    report.p_k2 = static_cast<double>(hits_k2) / n;
    report.p_r2 = static_cast<double>(hits_r2) / n;
    report.p_r23 = static_cast<double>(hits_r23) / n;

    if (config.with_forecast) {
        report.mean_rmsfe.assign(static_cast<std::size_t>(h_max), 0.0);
        report.se_rmsfe.assign(static_cast<std::size_t>(h_max), 0.0);
        for (int h = 0; h < h_max; ++h) {
            double s = 0.0;
            double s2 = 0.0;
            for (std::size_t rep = 0; rep < reps; ++rep) {
                const double v = report.rep_rmsfe[rep][static_cast<std::size_t>(h)];
                s += v;
                s2 += v * v;
            }
            report.mean_rmsfe[static_cast<std::size_t>(h)] = s / n;
            const double vh = reps > 1 ? (s2 - s * s / n) / (n - 1.0) : 0.0;
            report.se_rmsfe[static_cast<std::size_t>(h)] = std::sqrt(std::max(0.0, vh) / n);
        }
    }
    return report;
}

}  // namespace hdfts
