#include "hdfts/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "hdfts/annuity.hpp"
#include "hdfts/backtest.hpp"
#include "hdfts/dgp.hpp"
#include "hdfts/errors.hpp"
#include "hdfts/io_util.hpp"
#include "hdfts/panel.hpp"
#include "hdfts/panel_io.hpp"
#include "hdfts/pipeline.hpp"
#include "hdfts/reports.hpp"

namespace fs = std::filesystem;

namespace hdfts::cli {
namespace {

// Model options shared by fit / forecast / evaluate / price.
struct ModelOpts {
    ModelConfig cfg;
    std::string pad = "zero";
    std::string transform = "none";
};

void add_model_options(CLI::App* cmd, ModelOpts& m) {
    cmd->add_option("--P", m.cfg.P, "cumulative eigenvalue share for component selection")
        ->capture_default_str()
        ->check(CLI::Range(1e-12, 1.0));
    cmd->add_option("--nu", m.cfg.nu, "flat-top kernel plateau width in (0,1)")
        ->capture_default_str()
        ->check(CLI::Range(1e-12, 1.0 - 1e-12));
    cmd->add_option("--bandwidth", m.cfg.bandwidth,
                    "long-run covariance bandwidth (0 = adaptive per section)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--gamma", m.cfg.gamma, "roughness penalty of the concurrent regression")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--gcv", m.cfg.use_gcv, "select gamma by generalized cross-validation")
        ->capture_default_str();
    cmd->add_option("--h0", m.cfg.h0, "lag depth of the front-loading operator")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max_order", m.cfg.max_order, "VAR order cap")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--pad", m.pad, "treatment of sections with fewer components: zero|eigen")
        ->capture_default_str()
        ->check(CLI::IsMember({"zero", "eigen"}));
    cmd->add_flag("--demean-common", m.cfg.demean_common,
                  "demean factor curves before auto-cross-covariances")
        ->capture_default_str();
    cmd->add_option("--k", m.cfg.fixed_k, "force the back component count (0 = select)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--r", m.cfg.fixed_r, "force the front component count (0 = select)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--transform", m.transform, "value transform applied before fitting: none|log")
        ->capture_default_str()
        ->check(CLI::IsMember({"none", "log"}));
}

ModelConfig resolve_model(const ModelOpts& m) {
    ModelConfig cfg = m.cfg;
    cfg.pad = m.pad == "eigen" ? PadPolicy::Eigen : PadPolicy::Zero;
    return cfg;
}

fs::path prepare_out_dir(const std::string& out) {
    if (out.empty()) throw ConfigError("--out directory must not be empty");
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + out + "': " + ec.message());
    return dir;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path.string() + "'");
    body(out);
    out.flush();
    if (!out) throw ConfigError("failed while writing '" + path.string() + "'");
}

// Fully-resolved key=value dump of the parsed subcommand, reusable via
// --config on a rerun.
void write_config_echo(const fs::path& dir, const CLI::App& cmd) {
    const std::string text = cmd.config_to_str(true, false);
    write_file(dir / "config_echo.txt", [&](std::ostream& out) { out << text; });
}

FunctionalPanel load_panel(const std::string& path, const std::string& transform) {
    FunctionalPanel panel = read_panel_csv_file(path);
    if (transform == "log") return log_transform(panel);
    return panel;
}

std::vector<std::int64_t> parse_id_list(const std::string& text, const std::string& flag) {
    std::vector<std::int64_t> out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        auto value = io::parse_int(std::string_view(text).substr(start, comma - start));
        if (!value)
            throw ConfigError(flag + " expects a comma-separated integer list, got '" + text + "'");
        out.push_back(*value);
        start = comma + 1;
    }
    return out;
}

// --- simulate ---------------------------------------------------------

struct SimulateOpts {
    DgpConfig dgp;
    std::string out;
};

void run_simulate(const CLI::App& cmd, const SimulateOpts& opts) {
    const fs::path dir = prepare_out_dir(opts.out);
    write_config_echo(dir, cmd);
    const SimulatedPanel sim = simulate_dgp(opts.dgp);
    write_file(dir / "panel.csv", [&](std::ostream& out) { write_panel_csv(out, sim.panel); });
    const Grid& grid = sim.panel.grid;
    write_file(dir / "truth_front.csv", [&](std::ostream& out) {
        out << "component,point,value\n";
        for (Eigen::Index p = 0; p < sim.truth.front.rows(); ++p)
            for (Eigen::Index j = 0; j < sim.truth.front.cols(); ++j)
                out << (p + 1) << ',' << io::format_double(grid.points()[static_cast<std::size_t>(j)])
                    << ',' << io::format_double(sim.truth.front(p, j)) << '\n';
    });
    write_file(dir / "truth_back.csv", [&](std::ostream& out) {
        out << "section,component,point,value\n";
        for (std::size_t i = 0; i < sim.truth.back.size(); ++i)
            for (Eigen::Index q = 0; q < sim.truth.back[i].rows(); ++q)
                for (Eigen::Index j = 0; j < sim.truth.back[i].cols(); ++j)
                    out << sim.panel.section_ids[i] << ',' << (q + 1) << ','
                        << io::format_double(grid.points()[static_cast<std::size_t>(j)]) << ','
                        << io::format_double(sim.truth.back[i](q, j)) << '\n';
    });
    write_file(dir / "truth_factors.csv", [&](std::ostream& out) {
        write_factors_csv(out, sim.truth.factors, sim.panel.period_ids);
    });
}

// --- fit --------------------------------------------------------------

struct FitOpts {
    std::string panel_path;
    std::string out;
    ModelOpts model;
};

void run_fit(const CLI::App& cmd, const FitOpts& opts) {
    const fs::path dir = prepare_out_dir(opts.out);
    write_config_echo(dir, cmd);
    const FunctionalPanel panel = load_panel(opts.panel_path, opts.model.transform);
    const FittedModel model = fit_model(panel, resolve_model(opts.model));
    write_file(dir / "fit_summary.txt", [&](std::ostream& out) {
        out << format_fit_summary(model, panel.section_ids);
    });
    write_file(dir / "means.csv", [&](std::ostream& out) {
        write_means_csv(out, model.centered.means, panel.section_ids, panel.grid);
    });
    write_file(dir / "back_loadings.csv", [&](std::ostream& out) {
        write_back_loadings_csv(out, model.back, panel.section_ids);
    });
    write_file(dir / "front_loadings.csv",
               [&](std::ostream& out) { write_front_loadings_csv(out, model.front); });
    write_file(dir / "factors.csv", [&](std::ostream& out) {
        write_factors_csv(out, model.factors, panel.period_ids);
    });
    FunctionalPanel fitted{panel.grid, panel.section_ids, panel.period_ids, fitted_values(model)};
    if (opts.model.transform == "log") fitted = exp_transform(fitted);
    write_file(dir / "fitted.csv", [&](std::ostream& out) { write_panel_csv(out, fitted); });
}

// --- forecast ---------------------------------------------------------

struct ForecastOpts {
    std::string panel_path;
    std::string out;
    int h_max = 10;
    bool no_intervals = false;
    double alpha = 0.2;
    int n_resamples = 1000;
    std::uint64_t seed = 1;
    ModelOpts model;
};

void back_transform_bundle(ForecastBundle& bundle) {
    for (auto& m : bundle.point) m = m.array().exp();
    for (auto& m : bundle.lower) m = m.array().exp();
    for (auto& m : bundle.upper) m = m.array().exp();
}

void run_forecast(const CLI::App& cmd, const ForecastOpts& opts) {
    const fs::path dir = prepare_out_dir(opts.out);
    write_config_echo(dir, cmd);
    const FunctionalPanel panel = load_panel(opts.panel_path, opts.model.transform);
    const ModelConfig cfg = resolve_model(opts.model);
    ForecastBundle bundle =
        opts.no_intervals
            ? fit_and_forecast(panel, cfg, opts.h_max)
            : bootstrap_intervals(panel, cfg, opts.h_max, opts.alpha, opts.n_resamples, opts.seed);
    if (opts.model.transform == "log") back_transform_bundle(bundle);
    write_file(dir / "forecast.csv", [&](std::ostream& out) { write_forecast_csv(out, bundle); });
}

// --- evaluate ---------------------------------------------------------

struct EvaluateOpts {
    std::string panel_path;
    std::string out;
    bool study = false;
    EvalConfig eval;
    bool intervals = false;
    // Study-mode knobs.
    int n_sections = 10;
    int n_periods = 20;
    int reps = 100;
    double noise_sd = 0.5;
    int burn_in = 100;
    bool stable_row2 = false;
    bool with_forecast = false;
    ModelOpts model;
};

void run_evaluate(const CLI::App& cmd, const EvaluateOpts& opts) {
    const fs::path dir = prepare_out_dir(opts.out);
    write_config_echo(dir, cmd);
    if (opts.study && !opts.panel_path.empty())
        throw ConfigError("evaluate needs either --panel FILE or --study, not both");
    if (!opts.study && opts.panel_path.empty())
        throw ConfigError("evaluate needs either --panel FILE or --study");
    if (!opts.study) {
        const FunctionalPanel panel = load_panel(opts.panel_path, opts.model.transform);
        EvalConfig eval = opts.eval;
        eval.with_intervals = opts.intervals;
        const EvalReport report = expanding_window_eval(panel, resolve_model(opts.model), eval);
        write_file(dir / "eval_report.csv", [&](std::ostream& out) { write_eval_csv(out, report); });
        write_file(dir / "eval_by_section.csv",
                   [&](std::ostream& out) { write_eval_by_section_csv(out, report); });
        write_file(dir / "eval_report.txt",
                   [&](std::ostream& out) { out << format_eval_text(report); });
        return;
    }
    StudyConfig study;
    study.n_sections = opts.n_sections;
    study.n_periods = opts.n_periods;
    study.reps = opts.reps;
    study.seed = opts.eval.seed;
    study.noise_sd = opts.noise_sd;
    study.burn_in = opts.burn_in;
    study.stable_row2 = opts.stable_row2;
    study.with_forecast = opts.with_forecast;
    study.h_max = opts.eval.h_max;
    study.n0 = opts.eval.n0;
    study.model = resolve_model(opts.model);
    const StudyReport report = monte_carlo_study(study);
    write_file(dir / "study_summary.csv", [&](std::ostream& out) { write_study_csv(out, report); });
    write_file(dir / "study_reps.csv",
               [&](std::ostream& out) { write_study_reps_csv(out, report); });
    write_file(dir / "study_report.txt",
               [&](std::ostream& out) { out << format_study_text(report); });
}

// --- price ------------------------------------------------------------

struct PriceOpts {
    std::string panel_path;
    std::string out;
    int n_train = 0;
    std::string ages_text = "65,70,75,80,85";
    std::string periods_text;
    double interest = 0.02;
    std::string conversion = "constant-force";
    int h_max = 0;  // 0 = extend far enough for every requested quote
    ModelOpts model;
};

std::int64_t last_needed_period(int age, std::int64_t period) {
    if (age >= 65) return period + (90 - age) - 1;
    return period + (65 - age) + 24;
}

void run_price(const CLI::App& cmd, const PriceOpts& opts) {
    const fs::path dir = prepare_out_dir(opts.out);
    write_config_echo(dir, cmd);
    const FunctionalPanel full = read_panel_csv_file(opts.panel_path);
    const std::size_t n_periods = full.period_ids.size();
    if (opts.n_train < 4 || static_cast<std::size_t>(opts.n_train) > n_periods)
        throw ConfigError("--train must lie in [4, number of panel periods]");
    const std::size_t n_train = static_cast<std::size_t>(opts.n_train);

    std::vector<std::int64_t> ages64 = parse_id_list(opts.ages_text, "--ages");
    if (ages64.empty()) throw ConfigError("--ages must name at least one age");
    std::vector<int> ages;
    ages.reserve(ages64.size());
    for (std::int64_t a : ages64) ages.push_back(static_cast<int>(a));

    std::vector<std::int64_t> periods = parse_id_list(opts.periods_text, "--periods");
    if (periods.empty()) {
        periods.assign(full.period_ids.begin() + static_cast<std::ptrdiff_t>(n_train),
                       full.period_ids.end());
        if (periods.empty())
            throw ConfigError("--periods is empty and --train leaves no holdout periods");
    }

    const std::int64_t last_train = full.period_ids[n_train - 1];
    int h_max = opts.h_max;
    if (h_max <= 0) {
        std::int64_t needed = 0;
        for (int age : ages)
            for (std::int64_t t : periods)
                needed = std::max(needed, last_needed_period(age, t) - last_train);
        h_max = static_cast<int>(std::max<std::int64_t>(needed, 1));
    }

    const FunctionalPanel train = truncate_periods(full, n_train);
    const FunctionalPanel model_panel =
        opts.model.transform == "log" ? log_transform(train) : train;
    ForecastBundle bundle = fit_and_forecast(model_panel, resolve_model(opts.model), h_max);
    if (opts.model.transform == "log") back_transform_bundle(bundle);

    // Forecast surface: observed training rates continued by the point
    // forecasts on consecutive periods.
    FunctionalPanel extended = train;
    for (int h = 1; h <= h_max; ++h) extended.period_ids.push_back(last_train + h);
    for (std::size_t i = 0; i < extended.values.size(); ++i) {
        Eigen::MatrixXd block(extended.period_ids.size(), extended.grid.size());
        block.topRows(static_cast<Eigen::Index>(n_train)) = extended.values[i];
        block.bottomRows(h_max) = bundle.point[i];
        extended.values[i] = std::move(block);
    }

    const SurvivalConversion conversion = parse_conversion(opts.conversion);
    const PricingReport report =
        pricing_error_report(surfaces_from_panel(full), surfaces_from_panel(extended),
                             full.section_ids, ages, periods, opts.interest, conversion);
    write_file(dir / "pricing.csv", [&](std::ostream& out) { write_pricing_csv(out, report); });
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"two-fold functional factor models for grouped functional time series"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "hdfts 0.1.0");

    SimulateOpts sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "generate a synthetic two-fold factor panel");
    c_sim->set_config("--config");
    c_sim->add_option("--N", sim.dgp.n_sections, "number of sections")
        ->capture_default_str()
        ->check(CLI::Range(4, 100000));
    c_sim->add_option("--T", sim.dgp.n_periods, "number of periods")
        ->capture_default_str()
        ->check(CLI::Range(4, 100000));
    c_sim->add_option("--noise-sd", sim.dgp.noise_sd, "standard deviation of the measurement noise")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    c_sim->add_option("--seed", sim.dgp.seed, "RNG seed")->capture_default_str();
    c_sim->add_option("--burn-in", sim.dgp.burn_in, "discarded leading factor draws")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    c_sim->add_flag("--stable-row2", sim.dgp.stable_row2,
                    "use the stationary alternative for the second factor row")
        ->capture_default_str();
    c_sim->add_option("--out", sim.out, "output directory")->required();
    c_sim->callback([&] { run_simulate(*c_sim, sim); });

    FitOpts fit;
    CLI::App* c_fit = app.add_subcommand("fit", "estimate the two-fold factor model on a panel");
    c_fit->set_config("--config");
    c_fit->add_option("--panel", fit.panel_path, "input panel CSV")->required();
    c_fit->add_option("--out", fit.out, "output directory")->required();
    add_model_options(c_fit, fit.model);
    c_fit->callback([&] { run_fit(*c_fit, fit); });

    ForecastOpts fc;
    CLI::App* c_fc = app.add_subcommand("forecast", "fit and forecast curves ahead");
    c_fc->set_config("--config");
    c_fc->add_option("--panel", fc.panel_path, "input panel CSV")->required();
    c_fc->add_option("--out", fc.out, "output directory")->required();
    c_fc->add_option("--Hmax", fc.h_max, "forecast horizon")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    c_fc->add_flag("--no-intervals", fc.no_intervals, "skip bootstrap prediction intervals")
        ->capture_default_str();
    c_fc->add_option("--alpha", fc.alpha, "interval miss probability")
        ->capture_default_str()
        ->check(CLI::Range(1e-12, 1.0 - 1e-12));
    c_fc->add_option("--B", fc.n_resamples, "bootstrap resamples")
        ->capture_default_str()
        ->check(CLI::Range(20, 10000000));
    c_fc->add_option("--seed", fc.seed, "RNG seed")->capture_default_str();
    add_model_options(c_fc, fc.model);
    c_fc->callback([&] { run_forecast(*c_fc, fc); });

    EvaluateOpts ev;
    CLI::App* c_ev =
        app.add_subcommand("evaluate", "expanding-window forecast scores or a simulation study");
    c_ev->set_config("--config");
    c_ev->add_option("--panel", ev.panel_path, "input panel CSV (panel mode)");
    c_ev->add_flag("--study", ev.study, "run the Monte Carlo simulation study instead")
        ->capture_default_str();
    c_ev->add_option("--n0", ev.eval.n0, "first training size (0 = 3T/4)")
        ->capture_default_str();
    c_ev->add_option("--Hmax", ev.eval.h_max, "forecast horizon")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    c_ev->add_flag("--intervals", ev.intervals, "also score bootstrap prediction intervals")
        ->capture_default_str();
    c_ev->add_option("--alpha", ev.eval.alpha, "interval miss probability")
        ->capture_default_str()
        ->check(CLI::Range(1e-12, 1.0 - 1e-12));
    c_ev->add_option("--B", ev.eval.n_resamples, "bootstrap resamples")
        ->capture_default_str()
        ->check(CLI::Range(20, 10000000));
    c_ev->add_option("--seed", ev.eval.seed, "RNG seed")->capture_default_str();
    c_ev->add_option("--N", ev.n_sections, "study: number of sections")
        ->capture_default_str()
        ->check(CLI::Range(4, 100000));
    c_ev->add_option("--T", ev.n_periods, "study: number of periods")
        ->capture_default_str()
        ->check(CLI::Range(4, 100000));
    c_ev->add_option("--reps", ev.reps, "study: replications")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    c_ev->add_option("--noise-sd", ev.noise_sd, "study: noise standard deviation")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    c_ev->add_option("--burn-in", ev.burn_in, "study: discarded leading factor draws")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    c_ev->add_flag("--stable-row2", ev.stable_row2, "study: stationary second factor row")
        ->capture_default_str();
    c_ev->add_flag("--with-forecast", ev.with_forecast,
                   "study: also run the expanding-window forecast protocol")
        ->capture_default_str();
    c_ev->add_option("--out", ev.out, "output directory")->required();
    add_model_options(c_ev, ev.model);
    c_ev->callback([&] { run_evaluate(*c_ev, ev); });

    PriceOpts pr;
    CLI::App* c_pr = app.add_subcommand("price", "annuity pricing under true vs forecast rates");
    c_pr->set_config("--config");
    c_pr->add_option("--panel", pr.panel_path, "mortality panel CSV incl. holdout periods")
        ->required();
    c_pr->add_option("--train", pr.n_train, "number of leading periods used for fitting")
        ->required()
        ->check(CLI::PositiveNumber);
    c_pr->add_option("--ages", pr.ages_text, "comma-separated issue ages")
        ->capture_default_str();
    c_pr->add_option("--periods", pr.periods_text,
                     "comma-separated issue periods (default: all holdout periods)")
        ->capture_default_str();
    c_pr->add_option("--interest", pr.interest, "flat annual interest rate")
        ->capture_default_str()
        ->check(CLI::Range(-0.99, 10.0));
    c_pr->add_option("--conversion", pr.conversion,
                     "death-rate to survival conversion: constant-force|direct|central")
        ->capture_default_str()
        ->check(CLI::IsMember({"constant-force", "direct", "central"}));
    c_pr->add_option("--Hmax", pr.h_max, "forecast horizon (0 = cover all requested quotes)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    c_pr->add_option("--out", pr.out, "output directory")->required();
    add_model_options(c_pr, pr.model);
    c_pr->callback([&] { run_price(*c_pr, pr); });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << app.version() << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "cli_error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << e.code() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal_error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace hdfts::cli
