#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "hdfts/concurrent.hpp"
#include "hdfts/errors.hpp"
#include "hdfts/fpca.hpp"
#include "hdfts/front.hpp"
#include "hdfts/grid.hpp"
#include "hdfts/panel.hpp"

using namespace hdfts;

namespace {

BackLoadingSet loading_set(const Grid& grid, std::vector<Eigen::MatrixXd> loadings) {
    BackLoadingSet set;
    set.grid = grid;
    set.k = static_cast<int>(loadings.front().rows());
    set.section_counts.assign(loadings.size(), set.k);
    set.bandwidths.assign(loadings.size(), 2.0);
    set.bandwidth_fallbacks.assign(loadings.size(), 0);
    set.spectra.assign(loadings.size(), Eigen::VectorXd::Ones(set.k));
    set.loadings = std::move(loadings);
    return set;
}

Eigen::MatrixXd curve_row(const Grid& grid, double a, double b, double freq) {
    Eigen::MatrixXd m(1, static_cast<Eigen::Index>(grid.size()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double u = grid.points()[j];
        m(0, j) = a + b * std::sin(2.0 * std::numbers::pi * freq * u);
    }
    return m;
}

}  // namespace

TEST_CASE("zero-residual design is reproduced exactly") {
    const Grid grid = Grid::uniform(0.0, 1.0, 11);
    std::vector<Eigen::MatrixXd> loadings;
    for (int i = 0; i < 4; ++i) {
        Eigen::MatrixXd l(2, 11);
        for (Eigen::Index j = 0; j < 11; ++j) {
            const double u = grid.points()[static_cast<std::size_t>(j)];
            l(0, j) = 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * u + 1.1 * i);
            l(1, j) = -0.5 + std::cos(4.0 * std::numbers::pi * u + 0.8 * i);
        }
        loadings.push_back(l);
    }
    Eigen::MatrixXd g(2, 11);
    g.row(0) = curve_row(grid, 0.3, 0.7, 1.0).row(0);
    g.row(1) = curve_row(grid, -0.2, 0.4, 3.0).row(0);

    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(4, 11);
    for (int i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 11; ++j)
            y(i, j) = loadings[static_cast<std::size_t>(i)](0, j) * g(0, j) +
                      loadings[static_cast<std::size_t>(i)](1, j) * g(1, j);

    const Eigen::MatrixXd fit = fit_concurrent_cross_section(y, loading_set(grid, loadings), 0.0);
    CHECK((fit - g).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("intercept-only design returns cross-sectional means") {
    const Grid grid = Grid::uniform(0.0, 1.0, 7);
    std::vector<Eigen::MatrixXd> loadings(5, Eigen::MatrixXd::Ones(1, 7));
    Eigen::MatrixXd y(5, 7);
    for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index j = 0; j < 7; ++j) y(i, j) = std::sin(1.3 * (i + 2.0 * j));
    const Eigen::MatrixXd fit = fit_concurrent_cross_section(y, loading_set(grid, loadings), 0.0);
    for (Eigen::Index j = 0; j < 7; ++j)
        CHECK(fit(0, j) == doctest::Approx(y.col(j).mean()).epsilon(1e-10));
}

TEST_CASE("more components than sections is rejected") {
    const Grid grid = Grid::uniform(0.0, 1.0, 5);
    std::vector<Eigen::MatrixXd> loadings(2, Eigen::MatrixXd::Ones(3, 5));
    const Eigen::MatrixXd y = Eigen::MatrixXd::Ones(2, 5);
    CHECK_THROWS_AS(fit_concurrent_cross_section(y, loading_set(grid, loadings), 0.0),
                    const UnderdeterminedDesign&);
}

TEST_CASE("a zero panel produces zero factor curves") {
    const Grid grid = Grid::uniform(0.0, 1.0, 9);
    CenteredPanel centered;
    centered.grid = grid;
    centered.section_ids = {"a", "b", "c"};
    centered.period_ids = {1, 2, 3, 4};
    centered.means = Eigen::MatrixXd::Zero(3, 9);
    centered.centered.assign(3, Eigen::MatrixXd::Zero(4, 9));
    std::vector<Eigen::MatrixXd> loadings;
    for (int i = 0; i < 3; ++i) loadings.push_back(curve_row(grid, 1.0 + i, 0.4, 1.0));
    const CommonFactorCurves curves = estimate_common_curves(centered, loading_set(grid, loadings), 0.0);
    REQUIRE(curves.n_periods() == 4);
    for (const auto& c : curves.curves) CHECK(c.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("attained objective is nondecreasing in the penalty") {
    const Grid grid = Grid::uniform(0.0, 1.0, 13);
    std::vector<Eigen::MatrixXd> loadings;
    for (int i = 0; i < 5; ++i) loadings.push_back(curve_row(grid, 1.5 + 0.3 * i, 0.8, 1.0 + i));
    Eigen::MatrixXd y(5, 13);
    for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index j = 0; j < 13; ++j) y(i, j) = std::cos(0.7 * i + 1.9 * j);
    const BackLoadingSet set = loading_set(grid, loadings);
    double prev = -1.0;
    for (const double gamma : {0.0, 1e-4, 1e-2, 1.0, 100.0}) {
        const Eigen::MatrixXd fit = fit_concurrent_cross_section(y, set, gamma);
        const double objective = concurrent_objective(y, set, fit, gamma);
        CHECK(objective >= prev - 1e-10);
        prev = objective;
    }
}

TEST_CASE("factor covariances: zero curves, lag bounds") {
    const Grid grid = Grid::uniform(0.0, 1.0, 5);
    CommonFactorCurves curves;
    curves.grid = grid;
    curves.curves.assign(5, Eigen::MatrixXd::Zero(2, 5));
    CHECK(factor_auto_cross_cov(curves, 1, 0, 1).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK_THROWS_AS(factor_auto_cross_cov(curves, 4, 0, 0), const ConfigError&);
    CHECK_THROWS_AS(factor_auto_cross_cov(curves, 0, 0, 0), const ConfigError&);
    CHECK_THROWS_AS(factor_auto_cross_cov(curves, 1, 2, 0), const ConfigError&);
}

TEST_CASE("rank-1 front operator reduces to an algebraic identity") {
    const Grid grid = Grid::uniform(0.0, 1.0, 17);
    const Eigen::MatrixXd a = curve_row(grid, 0.2, 1.0, 1.0);
    const Eigen::MatrixXd b = curve_row(grid, -0.1, 0.8, 2.0);
    CommonFactorCurves curves;
    curves.grid = grid;
    // T = 3, k = 1, third curve zero: C_1(u, v) = a(u) b(v) / 2.
    curves.curves = {a, b, Eigen::MatrixXd::Zero(1, 17)};
    const MOperator m = build_m_operator(curves, 1);
    const double b_mass = grid.inner(b.row(0).transpose(), b.row(0).transpose());
    const Eigen::MatrixXd want = 0.25 * b_mass * a.row(0).transpose() * a.row(0);
    CHECK((m.surface - want).cwiseAbs().maxCoeff() < 1e-12);

    const FrontLoadings front = estimate_front_loadings(m, 0.9);
    CHECK(front.r == 1);
    Eigen::VectorXd unit_a = a.row(0).transpose();
    unit_a /= std::sqrt(grid.inner(unit_a, unit_a));
    const double diff =
        std::min((front.curves.row(0).transpose() - unit_a).cwiseAbs().maxCoeff(),
                 (front.curves.row(0).transpose() + unit_a).cwiseAbs().maxCoeff());
    CHECK(diff < 1e-8);
}

TEST_CASE("orthonormal projection returns coefficients exactly") {
    const Grid grid = Grid::uniform(0.0, 1.0, 101);
    Eigen::MatrixXd phi(2, 101);
    for (Eigen::Index j = 0; j < 101; ++j) {
        const double u = grid.points()[j];
        phi(0, j) = 1.0;
        phi(1, j) = std::sqrt(2.0) * std::cos(2.0 * std::numbers::pi * u);
    }
    // Orthonormalize exactly under the trapezoid inner product.
    phi.row(0) /= std::sqrt(grid.inner(phi.row(0).transpose(), phi.row(0).transpose()));
    phi.row(1) -= grid.inner(phi.row(1).transpose(), phi.row(0).transpose()) * phi.row(0);
    phi.row(1) /= std::sqrt(grid.inner(phi.row(1).transpose(), phi.row(1).transpose()));

    Eigen::MatrixXd c(2, 2);
    c << 0.7, -1.2, 0.4, 2.0;
    CommonFactorCurves curves;
    curves.grid = grid;
    Eigen::MatrixXd f(2, 101);
    for (int q = 0; q < 2; ++q)
        f.row(q) = c(0, q) * phi.row(0) + c(1, q) * phi.row(1);
    curves.curves = {f};

    FrontLoadings front;
    front.grid = grid;
    front.r = 2;
    front.curves = phi;
    front.spectrum = Eigen::VectorXd::Ones(2);
    const auto factors = project_factor_matrices(front, curves);
    REQUIRE(factors.size() == 1);
    CHECK((factors[0] - c).cwiseAbs().maxCoeff() < 1e-8);

    CommonFactorCurves zero = curves;
    zero.curves = {Eigen::MatrixXd::Zero(2, 101)};
    CHECK(project_factor_matrices(front, zero)[0].cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    CommonFactorCurves other = curves;
    other.grid = Grid::uniform(0.0, 2.0, 101);
    CHECK_THROWS_AS(project_factor_matrices(front, other), const ConfigError&);
}
