#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "hdfts/errors.hpp"
#include "hdfts/grid.hpp"
#include "hdfts/panel.hpp"

using namespace hdfts;

namespace {

FunctionalPanel tiny_panel(double fill) {
    FunctionalPanel p;
    p.grid = Grid::uniform(0.0, 1.0, 4);
    p.section_ids = {"a", "b"};
    p.period_ids = {1, 2, 3};
    p.values = {Eigen::MatrixXd::Constant(3, 4, fill), Eigen::MatrixXd::Constant(3, 4, fill)};
    return p;
}

}  // namespace

TEST_CASE("trapezoid weights integrate constants and lines exactly") {
    const Grid g = Grid::uniform(0.0, 1.0, 5);
    CHECK(g.size() == 5);
    CHECK(g.weights().sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.weight(0) == doctest::Approx(0.125));
    CHECK(g.weight(2) == doctest::Approx(0.25));
    CHECK(g.integrate(Eigen::VectorXd::Ones(5)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.integrate(g.points()) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g.inner(g.points(), Eigen::VectorXd::Ones(5)) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("grid equality and bad construction") {
    CHECK(Grid::uniform(0.0, 1.0, 5) == Grid::uniform(0.0, 1.0, 5));
    CHECK(Grid::uniform(0.0, 1.0, 5) != Grid::uniform(0.0, 1.0, 6));
    CHECK_THROWS_AS(Grid({1.0, 1.0, 2.0}), const Error&);   // not strictly increasing
    CHECK_THROWS_AS(Grid::uniform(1.0, 0.0, 3), const Error&);
}

TEST_CASE("log transform: unit value, floor rule, negative rejection") {
    FunctionalPanel p = tiny_panel(1.0);
    CHECK(log_transform(p).values[0](0, 0) == doctest::Approx(0.0));

    p.values[0](1, 2) = 0.0;
    const FunctionalPanel logged = log_transform(p);
    CHECK(logged.values[0](1, 2) == doctest::Approx(std::log(1e-8)));
    CHECK(log_transform(p, 1e-4).values[0](1, 2) == doctest::Approx(std::log(1e-4)));

    p.values[1](0, 0) = -0.5;
    CHECK_THROWS_AS(log_transform(p), const DomainError&);
    CHECK_THROWS_AS(log_transform(tiny_panel(1.0), 0.0), const ConfigError&);
    CHECK_THROWS_AS(log_transform(tiny_panel(1.0), -1.0), const ConfigError&);
}

TEST_CASE("centering: constants vanish, two-point means are exact") {
    const FunctionalPanel constant = tiny_panel(2.5);
    const CenteredPanel c = center(constant);
    CHECK(c.means.minCoeff() == doctest::Approx(2.5));
    CHECK(c.means.maxCoeff() == doctest::Approx(2.5));
    for (const auto& m : c.centered) CHECK(m.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    FunctionalPanel two = tiny_panel(0.0);
    two.period_ids = {1, 2};
    two.values = {Eigen::MatrixXd::Zero(2, 4), Eigen::MatrixXd::Zero(2, 4)};
    two.values[0](0, 1) = 1.0;
    two.values[0](1, 1) = 3.0;
    const CenteredPanel c2 = center(two);
    CHECK(c2.means(0, 1) == doctest::Approx(2.0));
    CHECK(c2.centered[0](0, 1) == doctest::Approx(-1.0));
    CHECK(c2.centered[0](1, 1) == doctest::Approx(1.0));
}

TEST_CASE("centering requires at least two periods") {
    FunctionalPanel p = tiny_panel(1.0);
    p.period_ids = {1};
    p.values = {Eigen::MatrixXd::Ones(1, 4), Eigen::MatrixXd::Ones(1, 4)};
    CHECK_THROWS_AS(center(p), const InsufficientData&);
}

TEST_CASE("truncating periods keeps a prefix and validates the bound") {
    FunctionalPanel p = tiny_panel(0.0);
    p.values[0](0, 0) = 7.0;
    p.values[0](2, 0) = 9.0;
    const FunctionalPanel head = truncate_periods(p, 2);
    CHECK(head.period_ids.size() == 2);
    CHECK(head.values[0].rows() == 2);
    CHECK(head.values[0](0, 0) == doctest::Approx(7.0));
    CHECK_THROWS_AS(truncate_periods(p, 0), const ConfigError&);
    CHECK_THROWS_AS(truncate_periods(p, 4), const ConfigError&);
}
