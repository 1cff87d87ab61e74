#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "hdfts/panel.hpp"

namespace hdfts {

// How an annual mortality rate m becomes a one-year survival
// probability. ConstantForce (exp(-m)) is the default; the alternatives
// treat m as a death probability directly or as a central rate.
enum class SurvivalConversion { ConstantForce, DirectQ, CentralDeath };

SurvivalConversion parse_conversion(const std::string& name);
std::string conversion_name(SurvivalConversion conversion);

// Mortality rates for one section on an integer age grid: rates(t, a)
// is the rate at period periods[t] and age ages[a]. Ages and periods
// are strictly ascending; periods must be consecutive so cohort
// diagonals are well defined.
struct MortalitySurface {
    std::vector<int> ages;
    std::vector<std::int64_t> periods;
    Eigen::MatrixXd rates;

    void validate() const;
};

// Interpret a functional panel as mortality surfaces: grid points must
// sit on integer ages (within 1e-6). Returns one surface per section.
std::vector<MortalitySurface> surfaces_from_panel(const FunctionalPanel& panel);

// Cohort survival probabilities np for n = 1..n_max starting at age x
// in period t: np = prod_{s=0}^{n-1} p(m at age x+s, period t+s), with
// rates clamped at 0. Missing cells raise CoverageError naming the
// first absent (age, period).
std::vector<double> survival_probabilities(const MortalitySurface& mortality, int x,
                                           std::int64_t t, int n_max,
                                           SurvivalConversion conversion);

struct AnnuityQuote {
    int age = 0;
    std::int64_t period = 0;
    double interest = 0.0;
    double present_value = 0.0;
};

// Present value of a life annuity of 1 per year issued at age x in
// period t, paying from the year after reaching retirement (65) up to
// age 90. Ages at or above 65 annuitize immediately; younger ages defer
// until 65 with payments discounted from t.
AnnuityQuote annuity_price(const MortalitySurface& mortality, int x, std::int64_t t,
                           double interest, SurvivalConversion conversion);

struct PricingRow {
    std::string section;
    int age = 0;
    std::int64_t period = 0;
    double pv_true = 0.0;
    double pv_forecast = 0.0;
    double error = 0.0;  // pv_forecast - pv_true
};

struct PricingReport {
    std::vector<PricingRow> rows;      // per (section, age, period)
    std::vector<PricingRow> averages;  // per (age, period), section = "mean"
    double interest = 0.0;
    SurvivalConversion conversion = SurvivalConversion::ConstantForce;
};

// Price every (section, age, period) combination under the true and the
// forecast mortality surfaces and report signed errors plus
// cross-section averages.
PricingReport pricing_error_report(const std::vector<MortalitySurface>& truth,
                                   const std::vector<MortalitySurface>& forecast,
                                   const std::vector<std::string>& section_ids,
                                   const std::vector<int>& ages,
                                   const std::vector<std::int64_t>& periods, double interest,
                                   SurvivalConversion conversion);

}  // namespace hdfts
