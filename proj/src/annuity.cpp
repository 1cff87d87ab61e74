#include "hdfts/annuity.hpp"

#include <algorithm>
#include <cmath>

#include "hdfts/errors.hpp"

namespace hdfts {

namespace {

constexpr int kRetirementAge = 65;
constexpr int kTerminalAge = 90;

double one_year_survival(double m, SurvivalConversion conversion) {
    m = std::max(0.0, m);
    switch (conversion) {
        case SurvivalConversion::ConstantForce:
            return std::exp(-m);
        case SurvivalConversion::DirectQ:
            return std::clamp(1.0 - m, 0.0, 1.0);
        case SurvivalConversion::CentralDeath:
            return std::clamp(1.0 - m / (1.0 + 0.5 * m), 0.0, 1.0);
    }
    throw ConfigError("unknown survival conversion");
}

std::size_t find_index_int(const std::vector<int>& values, int target) {
    const auto it = std::lower_bound(values.begin(), values.end(), target);
    if (it == values.end() || *it != target) {
        return values.size();
    }
    return static_cast<std::size_t>(it - values.begin());
}

std::size_t find_index_period(const std::vector<std::int64_t>& values, std::int64_t target) {
    const auto it = std::lower_bound(values.begin(), values.end(), target);
    if (it == values.end() || *it != target) {
        return values.size();
    }
    return static_cast<std::size_t>(it - values.begin());
}

}  // namespace

SurvivalConversion parse_conversion(const std::string& name) {
    if (name == "constant-force") {
        return SurvivalConversion::ConstantForce;
    }
    if (name == "direct") {
        return SurvivalConversion::DirectQ;
    }
    if (name == "central") {
        return SurvivalConversion::CentralDeath;
    }
    throw ConfigError("unknown conversion '" + name +
                      "' (expected constant-force, direct, or central)");
}

std::string conversion_name(SurvivalConversion conversion) {
    switch (conversion) {
        case SurvivalConversion::ConstantForce:
            return "constant-force";
        case SurvivalConversion::DirectQ:
            return "direct";
        case SurvivalConversion::CentralDeath:
            return "central";
    }
    throw ConfigError("unknown survival conversion");
}

void MortalitySurface::validate() const {
    if (ages.size() < 1 || periods.size() < 1) {
        throw ConfigError("mortality surface has no ages or no periods");
    }
    for (std::size_t a = 1; a < ages.size(); ++a) {
        if (ages[a] <= ages[a - 1]) {
            throw ConfigError("mortality ages must be strictly ascending");
        }
    }
    for (std::size_t t = 1; t < periods.size(); ++t) {
        if (periods[t] != periods[t - 1] + 1) {
            throw ConfigError("mortality periods must be consecutive for cohort diagonals");
        }
    }
    if (rates.rows() != static_cast<Eigen::Index>(periods.size()) ||
        rates.cols() != static_cast<Eigen::Index>(ages.size())) {
        throw ConfigError("mortality rates must be periods x ages");
    }
}

std::vector<MortalitySurface> surfaces_from_panel(const FunctionalPanel& panel) {
    panel.validate();
    std::vector<int> ages;
    ages.reserve(panel.n_points());
    for (std::size_t j = 0; j < panel.n_points(); ++j) {
        const double u = panel.grid.point(j);
        const double rounded = std::round(u);
        if (std::abs(u - rounded) > 1e-6) {
            throw ConfigError("grid point " + std::to_string(u) +
                              " is not an integer age; pricing needs an integer age grid");
        }
        ages.push_back(static_cast<int>(rounded));
    }
    std::vector<MortalitySurface> out;
    out.reserve(panel.n_sections());
    for (std::size_t i = 0; i < panel.n_sections(); ++i) {
        MortalitySurface surf;
        surf.ages = ages;
        surf.periods = panel.period_ids;
        surf.rates = panel.values[i];
        surf.validate();
        out.push_back(std::move(surf));
    }
    return out;
}

std::vector<double> survival_probabilities(const MortalitySurface& mortality, int x,
                                           std::int64_t t, int n_max,
                                           SurvivalConversion conversion) {
    mortality.validate();
    if (n_max < 1) {
        throw ConfigError("n_max must be >= 1");
    }
    std::vector<double> out(static_cast<std::size_t>(n_max));
    double cumulative = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        const int s = n - 1;
        const int age = x + s;
        const std::int64_t period = t + s;
        const std::size_t a = find_index_int(mortality.ages, age);
        const std::size_t p = find_index_period(mortality.periods, period);
        if (a >= mortality.ages.size() || p >= mortality.periods.size()) {
            throw CoverageError("mortality surface does not cover age " + std::to_string(age) +
                                " in period " + std::to_string(period));
        }
        cumulative *= one_year_survival(
            mortality.rates(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(a)), conversion);
        out[static_cast<std::size_t>(n - 1)] = cumulative;
    }
    return out;
}

AnnuityQuote annuity_price(const MortalitySurface& mortality, int x, std::int64_t t,
                           double interest, SurvivalConversion conversion) {
    if (x >= kTerminalAge) {
        throw DomainError("age " + std::to_string(x) + " is at or beyond the terminal age " +
                          std::to_string(kTerminalAge));
    }
    if (x < 0) {
        throw DomainError("age must be nonnegative");
    }
    if (!(interest > -1.0)) {
        throw DomainError("interest rate must exceed -1");
    }
    AnnuityQuote quote;
    quote.age = x;
    quote.period = t;
    quote.interest = interest;
    double pv = 0.0;
    if (x >= kRetirementAge) {
        const int n_max = kTerminalAge - x;
        const auto p = survival_probabilities(mortality, x, t, n_max, conversion);
        for (int n = 1; n <= n_max; ++n) {
            pv += p[static_cast<std::size_t>(n - 1)] / std::pow(1.0 + interest, n);
        }
    } else {
        const int defer = kRetirementAge - x;
        const auto p = survival_probabilities(mortality, kRetirementAge, t + defer,
                                              kTerminalAge - kRetirementAge, conversion);
        for (int n = 1; n <= kTerminalAge - kRetirementAge; ++n) {
            pv += p[static_cast<std::size_t>(n - 1)] / std::pow(1.0 + interest, n + defer);
        }
    }
    quote.present_value = pv;
    return quote;
}

PricingReport pricing_error_report(const std::vector<MortalitySurface>& truth,
                                   const std::vector<MortalitySurface>& forecast,
                                   const std::vector<std::string>& section_ids,
                                   const std::vector<int>& ages,
                                   const std::vector<std::int64_t>& periods, double interest,
                                   SurvivalConversion conversion) {
    if (truth.size() != forecast.size() || truth.size() != section_ids.size() || truth.empty()) {
        throw ConfigError("pricing needs matching nonempty true/forecast surfaces per section");
    }
    if (ages.empty() || periods.empty()) {
        throw ConfigError("pricing needs at least one age and one period");
    }
    PricingReport report;
    report.interest = interest;
    report.conversion = conversion;
    report.rows.reserve(truth.size() * ages.size() * periods.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        for (int age : ages) {
            for (std::int64_t period : periods) {
                PricingRow row;
                row.section = section_ids[i];
                row.age = age;
                row.period = period;
                row.pv_true = annuity_price(truth[i], age, period, interest, conversion).present_value;
                row.pv_forecast =
                    annuity_price(forecast[i], age, period, interest, conversion).present_value;
                row.error = row.pv_forecast - row.pv_true;
                report.rows.push_back(std::move(row));
            }
        }
    }
    report.averages.reserve(ages.size() * periods.size());
    const auto n = static_cast<double>(truth.size());
    for (int age : ages) {
        for (std::int64_t period : periods) {
            PricingRow avg;
            avg.section = "mean";
            avg.age = age;
            avg.period = period;
            for (const auto& row : report.rows) {
                if (row.age == age && row.period == period) {
                    avg.pv_true += row.pv_true;
                    avg.pv_forecast += row.pv_forecast;
                }
            }
            avg.pv_true /= n;
            avg.pv_forecast /= n;
            avg.error = avg.pv_forecast - avg.pv_true;
            report.averages.push_back(std::move(avg));
        }
    }
    return report;
}

}  // namespace hdfts
