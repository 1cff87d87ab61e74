#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hdfts/errors.hpp"
#include "hdfts/fpca.hpp"
#include "hdfts/grid.hpp"
#include "hdfts/panel.hpp"

using namespace hdfts;

TEST_CASE("rank-1 surface has one unit eigenvalue and recovers its curve") {
    const Grid grid = Grid::uniform(0.0, 1.0, 41);
    Eigen::VectorXd b(41);
    for (Eigen::Index j = 0; j < 41; ++j)
        b[j] = std::sqrt(2.0) * std::sin(2.0 * std::numbers::pi * grid.points()[j]);
    b /= std::sqrt(grid.inner(b, b));  // exact quadrature normalization
    const Eigen::MatrixXd surface = b * b.transpose();

    const EigenSystem sys = eigen_decompose_surface(surface, grid, 5);
    CHECK(sys.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
    for (int p = 1; p < 5; ++p) CHECK(sys.eigenvalues[p] == doctest::Approx(0.0).epsilon(1e-10));
    const double diff = std::min((sys.eigenfunctions.row(0).transpose() - b).cwiseAbs().maxCoeff(),
                                 (sys.eigenfunctions.row(0).transpose() + b).cwiseAbs().maxCoeff());
    CHECK(diff < 1e-8);
}

TEST_CASE("asking for more eigenpairs than grid points is rejected") {
    const Grid grid = Grid::uniform(0.0, 1.0, 5);
    const Eigen::MatrixXd surface = Eigen::MatrixXd::Identity(5, 5);
    CHECK_THROWS_AS(eigen_decompose_surface(surface, grid, 6), const ConfigError&);
    CHECK_THROWS_AS(eigen_decompose_surface(surface, grid, 0), const ConfigError&);
}

TEST_CASE("component counts on hand spectra") {
    Eigen::VectorXd spectrum(3);
    spectrum << 0.95, 0.04, 0.01;
    CHECK(select_component_count(spectrum, 0.9) == 1);
    spectrum << 0.5, 0.3, 0.2;
    CHECK(select_component_count(spectrum, 0.9) == 3);
    CHECK(select_component_count(spectrum, 0.79) == 2);
    CHECK_THROWS_AS(select_component_count(Eigen::VectorXd::Zero(3), 0.9),
                    const DegenerateSpectrum&);
}

TEST_CASE("identical sections get identical loadings and counts") {
    const Grid grid = Grid::uniform(0.0, 1.0, 21);
    Eigen::MatrixXd values(12, 21);
    for (Eigen::Index t = 0; t < 12; ++t)
        for (Eigen::Index j = 0; j < 21; ++j) {
            const double u = grid.points()[j];
            values(t, j) = std::sin(0.7 * t) * std::cos(2.0 * std::numbers::pi * u) +
                           0.3 * std::cos(1.1 * t) * u;
        }
    FunctionalPanel p;
    p.grid = grid;
    p.section_ids = {"a", "b"};
    p.period_ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    p.values = {values, values};

    const BackLoadingSet set = estimate_back_loadings(center(p), KernelPolicy{}, 0.9);
    CHECK(set.section_counts[0] == set.section_counts[1]);
    CHECK(set.bandwidths[0] == set.bandwidths[1]);
    CHECK((set.loadings[0] - set.loadings[1]).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("fixed component count overrides selection") {
    const Grid grid = Grid::uniform(0.0, 1.0, 11);
    Eigen::MatrixXd values(10, 11);
    for (Eigen::Index t = 0; t < 10; ++t)
        for (Eigen::Index j = 0; j < 11; ++j)
            values(t, j) = std::sin(0.9 * t + 0.3 * j) + 0.2 * std::cos(0.4 * t * j);
    FunctionalPanel p;
    p.grid = grid;
    p.section_ids = {"a"};
    p.period_ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    p.values = {values};
    const BackLoadingSet set =
        estimate_back_loadings(center(p), KernelPolicy{}, 0.9, PadPolicy::Zero, 3);
    CHECK(set.k == 3);
    CHECK(set.section_counts[0] == 3);
    CHECK(set.loadings[0].rows() == 3);
}
