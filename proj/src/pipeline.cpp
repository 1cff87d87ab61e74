#include "hdfts/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hdfts/errors.hpp"
#include "hdfts/parallel.hpp"
#include "hdfts/rng.hpp"

namespace hdfts {

namespace {

template <typename Fn>
auto run_stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.code(), std::string("stage ") + name + ": " + e.what());
    }
}

void check_config(const ModelConfig& config) {
    if (!(config.P > 0.0) || config.P > 1.0) {
        throw ConfigError("P must lie in (0, 1], got " + std::to_string(config.P));
    }
    if (!(config.nu > 0.0) || !(config.nu < 1.0)) {
        throw ConfigError("nu must lie in (0, 1), got " + std::to_string(config.nu));
    }
    if (config.bandwidth != 0.0 && !(config.bandwidth >= 1.0)) {
        throw ConfigError("bandwidth must be >= 1 (or 0 for adaptive)");
    }
    if (!(config.gamma >= 0.0)) {
        throw ConfigError("gamma must be >= 0");
    }
    if (config.h0 < 1) {
        throw ConfigError("h0 must be >= 1");
    }
    if (config.max_order < 1) {
        throw ConfigError("max_order must be >= 1");
    }
    if (config.fixed_k < 0 || config.fixed_r < 0) {
        throw ConfigError("fixed component counts must be >= 0");
    }
}

}  // namespace

FittedModel fit_model(const FunctionalPanel& panel, const ModelConfig& config) {
    check_config(config);
    panel.validate();

    FittedModel model;
    model.config = config;
    model.centered = run_stage("center", [&] { return center(panel); });

    const KernelPolicy kernel{config.nu, config.bandwidth};
    model.back = run_stage("back_loadings", [&] {
        return estimate_back_loadings(model.centered, kernel, config.P, config.pad, config.fixed_k);
    });

    model.gamma_used = config.gamma;
    if (config.use_gcv) {
        model.gamma_used = run_stage("gamma_selection", [&] {
            return select_gamma_gcv(model.centered, model.back);
        });
    }
    model.common = run_stage("common_curves", [&] {
        return estimate_common_curves(model.centered, model.back, model.gamma_used);
    });

    const MOperator m = run_stage("m_operator", [&] {
        return build_m_operator(model.common, config.h0, config.demean_common);
    });
    model.front = run_stage("front_loadings", [&] {
        return estimate_front_loadings(m, config.P, config.fixed_r);
    });
    model.factors = run_stage("factor_projection", [&] {
        return project_factor_matrices(model.front, model.common);
    });
    model.var = run_stage("var", [&] { return fit_var_matrices(model.factors, config.max_order); });
    return model;
}

Eigen::MatrixXd reconstruct_curves(const Eigen::MatrixXd& means, const Eigen::MatrixXd& front,
                                   const Eigen::MatrixXd& factors, const BackLoadingSet& loadings) {
    const auto N = static_cast<Eigen::Index>(loadings.loadings.size());
    const auto J = static_cast<Eigen::Index>(loadings.grid.size());
    const auto r = front.rows();
    const auto k = static_cast<Eigen::Index>(loadings.k);
    if (means.rows() != N || means.cols() != J) {
        throw ConfigError("means must be N x J");
    }
    if (front.cols() != J) {
        throw ConfigError("front loadings must be r x J");
    }
    if (factors.rows() != r || factors.cols() != k) {
        throw ConfigError("factor matrix must be r x k = " + std::to_string(r) + "x" +
                          std::to_string(k));
    }
    // g(j, q) = sum_p phi_p(u_j) F[p, q]; then each section contracts g
    // against its own loading curves.
    const Eigen::MatrixXd g = front.transpose() * factors;  // J x k
    Eigen::MatrixXd out(N, J);
    for (Eigen::Index i = 0; i < N; ++i) {
        out.row(i) = means.row(i) +
                     (loadings.loadings[static_cast<std::size_t>(i)].cwiseProduct(g.transpose()))
                         .colwise()
                         .sum();
    }
    return out;
}

std::vector<Eigen::MatrixXd> fitted_values(const FittedModel& model) {
    const auto N = model.centered.n_sections();
    const auto T = model.centered.n_periods();
    const auto J = static_cast<Eigen::Index>(model.centered.n_points());
    std::vector<Eigen::MatrixXd> out(N, Eigen::MatrixXd(static_cast<Eigen::Index>(T), J));
    for (std::size_t t = 0; t < T; ++t) {
        const Eigen::MatrixXd curves =
            reconstruct_curves(model.centered.means, model.front.curves, model.factors[t], model.back);
        for (std::size_t i = 0; i < N; ++i) {
            out[i].row(static_cast<Eigen::Index>(t)) = curves.row(static_cast<Eigen::Index>(i));
        }
    }
    return out;
}

std::vector<Eigen::MatrixXd> forecast_curves(const FittedModel& model, int h_max) {
    if (h_max < 1) {
        throw ConfigError("h_max must be >= 1");
    }
    std::vector<Eigen::VectorXd> history;
    history.reserve(model.factors.size());
    for (const auto& f : model.factors) {
        history.push_back(vectorize_factor(f));
    }
    const auto forecasts = forecast_factors(model.var, history, h_max);

    const auto N = model.centered.n_sections();
    const auto J = static_cast<Eigen::Index>(model.centered.n_points());
    std::vector<Eigen::MatrixXd> out(N, Eigen::MatrixXd(h_max, J));
    for (int h = 1; h <= h_max; ++h) {
        const Eigen::MatrixXd f = reshape_factor(forecasts[static_cast<std::size_t>(h - 1)],
                                                 model.front.r, model.back.k);
        const Eigen::MatrixXd curves =
            reconstruct_curves(model.centered.means, model.front.curves, f, model.back);
        for (std::size_t i = 0; i < N; ++i) {
            out[i].row(h - 1) = curves.row(static_cast<Eigen::Index>(i));
        }
    }
    return out;
}

ForecastBundle fit_and_forecast(const FunctionalPanel& panel, const ModelConfig& config, int h_max) {
    const FittedModel model = fit_model(panel, config);
    ForecastBundle bundle;
    bundle.grid = panel.grid;
    bundle.section_ids = panel.section_ids;
    bundle.period_ids = panel.period_ids;
    bundle.h_max = h_max;
    bundle.point = forecast_curves(model, h_max);
    return bundle;
}

ExpandingForecasts expanding_forecasts(const FunctionalPanel& panel, const ModelConfig& config,
                                       std::size_t first_origin, int h_max) {
    panel.validate();
    const auto T = panel.n_periods();
    if (h_max < 1) {
        throw ConfigError("h_max must be >= 1");
    }
    if (first_origin < 4 || first_origin >= T) {
        throw InsufficientData("first origin " + std::to_string(first_origin) +
                               " outside [4, T-1] with T=" + std::to_string(T));
    }
    const std::size_t n_origins = T - first_origin;
    ExpandingForecasts out;
    out.first_origin = first_origin;
    out.forecasts.resize(n_origins);
    out.selected_k.assign(n_origins, 0);
    out.selected_r.assign(n_origins, 0);
    parallel_for(n_origins, [&](std::size_t o) {
        const std::size_t kappa = first_origin + o;
        try {
            const FittedModel m = fit_model(truncate_periods(panel, kappa), config);
            const int h = std::min<int>(h_max, static_cast<int>(T - kappa));
            out.forecasts[o] = forecast_curves(m, h);
            out.selected_k[o] = m.back.k;
            out.selected_r[o] = m.front.r;
        } catch (const Error& e) {
            throw Error(e.code(), "expanding-window origin " + std::to_string(kappa) + ": " +
                                  e.what());
        }
    });
    return out;
}

double percentile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) {
        throw ConfigError("percentile of an empty sample");
    }
    if (!(q >= 0.0) || !(q <= 1.0)) {
        throw ConfigError("percentile level must lie in [0, 1]");
    }
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd> bootstrap_percentiles(
    const Eigen::RowVectorXd& point, const Eigen::MatrixXd& errors, double alpha, int n_resamples,
    std::uint64_t seed, std::size_t section, int horizon) {
    if (errors.rows() < 1 || errors.cols() != point.cols()) {
        throw ConfigError("error sample shape does not match the point forecast");
    }
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw ConfigError("alpha must lie in (0, 1)");
    }
    const auto J = point.cols();
    const auto B = static_cast<std::size_t>(n_resamples);
    Eigen::MatrixXd draws(static_cast<Eigen::Index>(B), J);
    std::uniform_int_distribution<Eigen::Index> pick(0, errors.rows() - 1);
    for (std::size_t b = 0; b < B; ++b) {
        auto eng = rng::engine(seed, {rng::kBootstrap, static_cast<std::uint64_t>(section),
                                      static_cast<std::uint64_t>(horizon),
                                      static_cast<std::uint64_t>(b)});
        for (Eigen::Index j = 0; j < J; ++j) {
            draws(static_cast<Eigen::Index>(b), j) = point(j) + errors(pick(eng), j);
        }
    }
    Eigen::RowVectorXd lower(J);
    Eigen::RowVectorXd upper(J);
    std::vector<double> column(B);
    for (Eigen::Index j = 0; j < J; ++j) {
        for (std::size_t b = 0; b < B; ++b) {
            column[b] = draws(static_cast<Eigen::Index>(b), j);
        }
        std::sort(column.begin(), column.end());
        lower(j) = percentile_sorted(column, alpha / 2.0);
        upper(j) = percentile_sorted(column, 1.0 - alpha / 2.0);
    }
    return {lower, upper};
}

ForecastBundle bootstrap_intervals(const FunctionalPanel& panel, const ModelConfig& config,
                                   int h_max, double alpha, int n_resamples, std::uint64_t seed) {
    if (n_resamples < 20) {
        throw ConfigError("bootstrap needs at least 20 resamples, got " +
                          std::to_string(n_resamples));
    }
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw ConfigError("alpha must lie in (0, 1)");
    }
    ForecastBundle bundle = fit_and_forecast(panel, config, h_max);
    bundle.alpha = alpha;
    bundle.n_resamples = n_resamples;
    bundle.seed = seed;

    const auto T = panel.n_periods();
    const auto N = panel.n_sections();
    const std::size_t first_origin = std::max<std::size_t>(10, T / 2);
    if (first_origin >= T) {
        throw InsufficientData("panel of " + std::to_string(T) +
                               " periods leaves no expanding-window origins for in-sample errors");
    }
    const ExpandingForecasts expanding = expanding_forecasts(panel, config, first_origin, h_max);

    // Collect in-sample errors per (section, horizon).
    const auto J = static_cast<Eigen::Index>(panel.n_points());
    bundle.insample_errors.assign(N, std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(h_max)));
    bundle.origin_counts.assign(static_cast<std::size_t>(h_max), 0);
    for (int h = 1; h <= h_max; ++h) {
        const auto count = static_cast<std::ptrdiff_t>(T) - h - static_cast<std::ptrdiff_t>(first_origin) + 1;
        bundle.origin_counts[static_cast<std::size_t>(h - 1)] = std::max<std::ptrdiff_t>(0, count);
    }
    for (std::size_t i = 0; i < N; ++i) {
        for (int h = 1; h <= h_max; ++h) {
            const int count = bundle.origin_counts[static_cast<std::size_t>(h - 1)];
            if (count <= 0) {
                continue;
            }
            Eigen::MatrixXd errs(count, J);
            for (int o = 0; o < count; ++o) {
                const std::size_t kappa = first_origin + static_cast<std::size_t>(o);
                errs.row(o) = panel.values[i].row(static_cast<Eigen::Index>(kappa) + h - 1) -
                              expanding.forecasts[static_cast<std::size_t>(o)][i].row(h - 1);
            }
            bundle.insample_errors[i][static_cast<std::size_t>(h - 1)] = std::move(errs);
        }
    }

    bool pooled = false;
    for (int h = 1; h <= h_max; ++h) {
        if (bundle.origin_counts[static_cast<std::size_t>(h - 1)] < 10) {
            pooled = true;
        }
    }
    bundle.pooled_errors = pooled;

    // One pooled error matrix per section when any horizon runs short.
    std::vector<Eigen::MatrixXd> pooled_errors;
    if (pooled) {
        pooled_errors.resize(N);
        for (std::size_t i = 0; i < N; ++i) {
            Eigen::Index rows = 0;
            for (const auto& e : bundle.insample_errors[i]) {
                rows += e.rows();
            }
            if (rows == 0) {
                throw InsufficientData("no in-sample errors available for intervals");
            }
            Eigen::MatrixXd all(rows, J);
            Eigen::Index at = 0;
            for (const auto& e : bundle.insample_errors[i]) {
                if (e.rows() > 0) {
                    all.middleRows(at, e.rows()) = e;
                    at += e.rows();
                }
            }
            pooled_errors[i] = std::move(all);
        }
    }

    bundle.lower.assign(N, Eigen::MatrixXd(h_max, J));
    bundle.upper.assign(N, Eigen::MatrixXd(h_max, J));
    parallel_for(N, [&](std::size_t i) {
        for (int h = 1; h <= h_max; ++h) {
            const Eigen::MatrixXd& errs =
                pooled ? pooled_errors[i] : bundle.insample_errors[i][static_cast<std::size_t>(h - 1)];
            auto [lo, up] = bootstrap_percentiles(bundle.point[i].row(h - 1), errs, alpha,
                                                  n_resamples, seed, i, h);
            bundle.lower[i].row(h - 1) = lo;
            bundle.upper[i].row(h - 1) = up;
        }
    });
    return bundle;
}

}  // namespace hdfts
