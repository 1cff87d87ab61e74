#include "hdfts/reports.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include "hdfts/io_util.hpp"

namespace hdfts {

namespace {

std::string fixed(double x, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, x);
    return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

void write_means_csv(std::ostream& out, const Eigen::MatrixXd& means,
                     const std::vector<std::string>& section_ids, const Grid& grid) {
    out << "section,point,value\n";
    for (std::size_t i = 0; i < section_ids.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            out << section_ids[i] << ',' << io::format_double(grid.point(j)) << ','
                << io::format_double(means(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))
                << '\n';
        }
    }
}

void write_back_loadings_csv(std::ostream& out, const BackLoadingSet& loadings,
                             const std::vector<std::string>& section_ids) {
    out << "section,component,point,value\n";
    for (std::size_t i = 0; i < section_ids.size(); ++i) {
        for (int q = 0; q < loadings.k; ++q) {
            for (std::size_t j = 0; j < loadings.grid.size(); ++j) {
                out << section_ids[i] << ',' << (q + 1) << ','
                    << io::format_double(loadings.grid.point(j)) << ','
                    << io::format_double(loadings.loadings[i](q, static_cast<Eigen::Index>(j)))
                    << '\n';
            }
        }
    }
}

void write_front_loadings_csv(std::ostream& out, const FrontLoadings& front) {
    out << "component,point,value\n";
    for (int p = 0; p < front.r; ++p) {
        for (std::size_t j = 0; j < front.grid.size(); ++j) {
            out << (p + 1) << ',' << io::format_double(front.grid.point(j)) << ','
                << io::format_double(front.curves(p, static_cast<Eigen::Index>(j))) << '\n';
        }
    }
}

void write_factors_csv(std::ostream& out, const std::vector<Eigen::MatrixXd>& factors,
                       const std::vector<std::int64_t>& period_ids) {
    out << "t,p,q,value\n";
    for (std::size_t t = 0; t < factors.size(); ++t) {
        for (Eigen::Index p = 0; p < factors[t].rows(); ++p) {
            for (Eigen::Index q = 0; q < factors[t].cols(); ++q) {
                out << period_ids[t] << ',' << (p + 1) << ',' << (q + 1) << ','
                    << io::format_double(factors[t](p, q)) << '\n';
            }
        }
    }
}

void write_forecast_csv(std::ostream& out, const ForecastBundle& bundle) {
    out << "section,origin,horizon,point,value,lower,upper\n";
    const bool with_intervals = !bundle.lower.empty();
    const auto origin = bundle.period_ids.back();
    for (std::size_t i = 0; i < bundle.section_ids.size(); ++i) {
        for (int h = 1; h <= bundle.h_max; ++h) {
            for (std::size_t j = 0; j < bundle.grid.size(); ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                out << bundle.section_ids[i] << ',' << origin << ',' << h << ','
                    << io::format_double(bundle.grid.point(j)) << ','
                    << io::format_double(bundle.point[i](h - 1, jj)) << ',';
                if (with_intervals) {
                    out << io::format_double(bundle.lower[i](h - 1, jj)) << ','
                        << io::format_double(bundle.upper[i](h - 1, jj));
                } else {
                    out << ',';
                }
                out << '\n';
            }
        }
    }
}

void write_eval_csv(std::ostream& out, const EvalReport& report) {
    const bool with_scores = !report.mean_interval_score.empty();
    out << "horizon,count,mean_rmsfe,pooled_rmsfe";
    if (with_scores) {
        out << ",mean_interval_score";
    }
    out << '\n';
    for (std::size_t h = 0; h < report.horizons.size(); ++h) {
        out << report.horizons[h] << ',' << report.forecast_counts[h] << ','
            << io::format_double(report.mean_rmsfe[h]) << ','
            << io::format_double(report.pooled_rmsfe[h]);
        if (with_scores) {
            out << ',' << io::format_double(report.mean_interval_score[h]);
        }
        out << '\n';
    }
}

void write_eval_by_section_csv(std::ostream& out, const EvalReport& report) {
    const bool with_scores = report.per_section_score.size() > 0;
    out << "section,horizon,rmsfe";
    if (with_scores) {
        out << ",interval_score";
    }
    out << '\n';
    for (std::size_t i = 0; i < report.section_ids.size(); ++i) {
        for (std::size_t h = 0; h < report.horizons.size(); ++h) {
            out << report.section_ids[i] << ',' << report.horizons[h] << ','
                << io::format_double(report.per_section_rmsfe(static_cast<Eigen::Index>(i),
                                                              static_cast<Eigen::Index>(h)));
            if (with_scores) {
                out << ',' << io::format_double(report.per_section_score(
                               static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(h)));
            }
            out << '\n';
        }
    }
}

void write_study_csv(std::ostream& out, const StudyReport& report) {
    out << "metric,horizon,value\n";
    out << "mean_rmse,," << io::format_double(report.mean_rmse) << '\n';
    out << "se_rmse,," << io::format_double(report.se_rmse) << '\n';
    out << "mean_rmse_signal,," << io::format_double(report.mean_rmse_signal) << '\n';
    out << "se_rmse_signal,," << io::format_double(report.se_rmse_signal) << '\n';
    out << "p_k2,," << io::format_double(report.p_k2) << '\n';
    out << "p_r2,," << io::format_double(report.p_r2) << '\n';
    out << "p_r23,," << io::format_double(report.p_r23) << '\n';
    for (std::size_t h = 0; h < report.mean_rmsfe.size(); ++h) {
        out << "mean_rmsfe," << (h + 1) << ',' << io::format_double(report.mean_rmsfe[h]) << '\n';
        out << "se_rmsfe," << (h + 1) << ',' << io::format_double(report.se_rmsfe[h]) << '\n';
    }
}

void write_study_reps_csv(std::ostream& out, const StudyReport& report) {
    out << "rep,rmse,rmse_signal,k,r";
    const std::size_t n_h = report.mean_rmsfe.size();
    for (std::size_t h = 1; h <= n_h; ++h) {
        out << ",rmsfe_h" << h;
    }
    out << '\n';
    for (std::size_t rep = 0; rep < report.rep_rmse.size(); ++rep) {
        out << (rep + 1) << ',' << io::format_double(report.rep_rmse[rep]) << ','
            << io::format_double(report.rep_rmse_signal[rep]) << ',' << report.rep_k[rep] << ','
            << report.rep_r[rep];
        for (std::size_t h = 0; h < n_h; ++h) {
            out << ',' << io::format_double(report.rep_rmsfe[rep][h]);
        }
        out << '\n';
    }
}

void write_pricing_csv(std::ostream& out, const PricingReport& report) {
    out << "section,age,period,pv_true,pv_forecast,error\n";
    auto emit = [&](const PricingRow& row) {
        out << row.section << ',' << row.age << ',' << row.period << ','
            << io::format_double(row.pv_true) << ',' << io::format_double(row.pv_forecast) << ','
            << io::format_double(row.error) << '\n';
    };
    for (const auto& row : report.rows) {
        emit(row);
    }
    for (const auto& row : report.averages) {
        emit(row);
    }
}

std::string format_eval_text(const EvalReport& report) {
    std::ostringstream out;
    const bool with_scores = !report.mean_interval_score.empty();
    out << "Expanding-window forecast evaluation (training starts at " << report.n0
        << " periods)\n\n";
    out << pad_right("horizon", 9) << pad_left("count", 7) << pad_left("mean RMSFE", 13)
        << pad_left("pooled RMSFE", 14);
    if (with_scores) {
        out << pad_left("interval score", 16);
    }
    out << '\n';
    for (std::size_t h = 0; h < report.horizons.size(); ++h) {
        out << pad_right(std::to_string(report.horizons[h]), 9)
            << pad_left(std::to_string(report.forecast_counts[h]), 7)
            << pad_left(fixed(report.mean_rmsfe[h], 4), 13)
            << pad_left(fixed(report.pooled_rmsfe[h], 4), 14);
        if (with_scores) {
            out << pad_left(fixed(report.mean_interval_score[h], 4), 16);
        }
        out << '\n';
    }
    return out.str();
}

std::string format_study_text(const StudyReport& report) {
    std::ostringstream out;
    out << "Monte Carlo study: T=" << report.config.n_periods << ", N=" << report.config.n_sections
        << ", " << report.config.reps << " replications, seed " << report.config.seed << "\n\n";
    out << pad_right("T", 5) << pad_right("N", 5) << pad_left("RMSE", 9) << pad_left("(se)", 9)
        << pad_left("RMSE*", 9) << pad_left("P(r=2 or 3)", 13) << pad_left("P(k=2)", 9) << '\n';
    out << pad_right(std::to_string(report.config.n_periods), 5)
        << pad_right(std::to_string(report.config.n_sections), 5)
        << pad_left(fixed(report.mean_rmse, 2), 9) << pad_left(fixed(report.se_rmse, 3), 9)
        << pad_left(fixed(report.mean_rmse_signal, 2), 9) << pad_left(fixed(report.p_r23, 2), 13)
        << pad_left(fixed(report.p_k2, 2), 9) << '\n';
    out << "\nRMSE compares fitted to observed curves; RMSE* compares fitted to the\n"
           "noiseless signal curves.\n";
    if (!report.mean_rmsfe.empty()) {
        out << '\n' << pad_right("h", 5) << pad_left("mean RMSFE", 12) << pad_left("(se)", 9) << '\n';
        for (std::size_t h = 0; h < report.mean_rmsfe.size(); ++h) {
            out << pad_right(std::to_string(h + 1), 5) << pad_left(fixed(report.mean_rmsfe[h], 3), 12)
                << pad_left(fixed(report.se_rmsfe[h], 3), 9) << '\n';
        }
    }
    return out.str();
}

std::string format_fit_summary(const FittedModel& model, const std::vector<std::string>& section_ids) {
    std::ostringstream out;
    const auto N = section_ids.size();
    out << "Two-fold factor model fit\n";
    out << "  sections: " << N << ", periods: " << model.centered.n_periods()
        << ", grid points: " << model.centered.n_points() << '\n';
    out << "  back components k = " << model.back.k << " (max over sections)\n";
    out << "  front components r = " << model.front.r << '\n';
    out << "  concurrent-regression gamma = " << io::format_double(model.gamma_used) << '\n';
    out << "  VAR order = " << model.var.order << (model.var.order_capped ? " (order cap reduced)" : "")
        << ", AIC = " << fixed(model.var.aic, 4) << '\n';
    out << '\n'
        << pad_right("section", 10) << pad_left("k_i", 5) << pad_left("bandwidth", 11)
        << pad_left("cum1", 8) << pad_left("cum2", 8) << pad_left("cum3", 8) << pad_left("cum4", 8)
        << '\n';
    for (std::size_t i = 0; i < N; ++i) {
        const auto& spectrum = model.back.spectra[i];
        const double total = spectrum.sum();
        out << pad_right(section_ids[i], 10)
            << pad_left(std::to_string(model.back.section_counts[i]), 5)
            << pad_left(fixed(model.back.bandwidths[i], 1), 11);
        double cum = 0.0;
        for (Eigen::Index m = 0; m < 4; ++m) {
            if (m < spectrum.size()) cum += spectrum[m];
            out << pad_left(total > 0.0 ? fixed(cum / total, 3) : "-", 8);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace hdfts
