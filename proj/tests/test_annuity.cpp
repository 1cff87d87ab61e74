#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "hdfts/annuity.hpp"
#include "hdfts/errors.hpp"
#include "hdfts/grid.hpp"
#include "hdfts/panel.hpp"

using namespace hdfts;

namespace {

MortalitySurface flat_surface(double rate) {
    MortalitySurface s;
    for (int a = 55; a <= 95; ++a) s.ages.push_back(a);
    for (std::int64_t t = 1990; t <= 2040; ++t) s.periods.push_back(t);
    s.rates = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(s.periods.size()),
                                        static_cast<Eigen::Index>(s.ages.size()), rate);
    return s;
}

}  // namespace

TEST_CASE("conversion names round-trip; unknown names are rejected") {
    CHECK(parse_conversion("constant-force") == SurvivalConversion::ConstantForce);
    CHECK(conversion_name(parse_conversion("direct")) == "direct");
    CHECK(conversion_name(parse_conversion("central")) == "central");
    CHECK_THROWS_AS(parse_conversion("gompertz"), const ConfigError&);
}

TEST_CASE("zero mortality survives with certainty") {
    const MortalitySurface s = flat_surface(0.0);
    const auto p = survival_probabilities(s, 60, 2000, 10, SurvivalConversion::ConstantForce);
    for (const double v : p) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("constant rate gives exponential survival") {
    const MortalitySurface s = flat_surface(0.1);
    const auto p = survival_probabilities(s, 60, 2000, 2, SurvivalConversion::ConstantForce);
    CHECK(p[1] == doctest::Approx(std::exp(-0.2)).epsilon(1e-12));
    const auto q = survival_probabilities(s, 60, 2000, 2, SurvivalConversion::DirectQ);
    CHECK(q[1] == doctest::Approx(0.81).epsilon(1e-12));
}

TEST_CASE("missing coverage names the first absent cell") {
    MortalitySurface s = flat_surface(0.05);
    try {
        survival_probabilities(s, 90, 2035, 10, SurvivalConversion::ConstantForce);
        FAIL("expected CoverageError");
    } catch (const CoverageError& e) {
        const std::string what = e.what();
        CHECK(what.find("96") != std::string::npos);
        CHECK(what.find("2041") != std::string::npos);
    }
}

TEST_CASE("certain payments: ages 89, 65 and 64 at zero interest") {
    const MortalitySurface s = flat_surface(0.0);
    CHECK(annuity_price(s, 89, 2000, 0.0, SurvivalConversion::ConstantForce).present_value ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(annuity_price(s, 65, 2000, 0.0, SurvivalConversion::ConstantForce).present_value ==
          doctest::Approx(25.0).epsilon(1e-12));
    CHECK(annuity_price(s, 64, 2000, 0.0, SurvivalConversion::ConstantForce).present_value ==
          doctest::Approx(25.0).epsilon(1e-12));
    CHECK_THROWS_AS(annuity_price(s, 90, 2000, 0.0, SurvivalConversion::ConstantForce),
                    const DomainError&);
}

TEST_CASE("deferral discounts but does not re-count payments") {
    const MortalitySurface s = flat_surface(0.0);
    const double at_65 = annuity_price(s, 65, 2006, 0.05, SurvivalConversion::ConstantForce).present_value;
    const double at_64 = annuity_price(s, 64, 2005, 0.05, SurvivalConversion::ConstantForce).present_value;
    CHECK(at_64 == doctest::Approx(at_65 / 1.05).epsilon(1e-12));
}

TEST_CASE("pricing report: identical inputs give zero errors and full row counts") {
    const MortalitySurface s = flat_surface(0.03);
    const PricingReport report =
        pricing_error_report({s, s, s}, {s, s, s}, {"x", "y", "z"}, {60, 70}, {2000, 2005, 2010},
                             0.02, SurvivalConversion::ConstantForce);
    CHECK(report.rows.size() == 3 * 2 * 3);
    CHECK(report.averages.size() == 2 * 3);
    for (const auto& row : report.rows) {
        CHECK(row.error == doctest::Approx(0.0));
        CHECK(row.pv_true > 0.0);
        CHECK(row.pv_true <= 25.0);
    }
    for (const auto& row : report.averages) CHECK(row.section == "mean");
}

TEST_CASE("panels on integer age grids become mortality surfaces") {
    FunctionalPanel p;
    p.grid = Grid::uniform(60.0, 64.0, 5);
    p.section_ids = {"a", "b"};
    p.period_ids = {2000, 2001, 2002};
    p.values = {Eigen::MatrixXd::Constant(3, 5, 0.01), Eigen::MatrixXd::Constant(3, 5, 0.02)};
    const auto surfaces = surfaces_from_panel(p);
    REQUIRE(surfaces.size() == 2);
    CHECK(surfaces[0].ages.front() == 60);
    CHECK(surfaces[0].ages.back() == 64);
    CHECK(surfaces[1].rates(2, 4) == doctest::Approx(0.02));

    FunctionalPanel frac = p;
    frac.grid = Grid::uniform(60.0, 64.5, 5);
    CHECK_THROWS_AS(surfaces_from_panel(frac), const ConfigError&);
}
