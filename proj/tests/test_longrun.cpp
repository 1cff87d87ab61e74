#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "hdfts/errors.hpp"
#include "hdfts/grid.hpp"
#include "hdfts/longrun.hpp"

using namespace hdfts;

namespace {

Eigen::MatrixXd noise(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(eng);
    return m;
}

}  // namespace

TEST_CASE("flat-top weight endpoints and domain") {
    CHECK(flat_top_weight(0.0, 0.5) == doctest::Approx(1.0));
    CHECK(flat_top_weight(0.49, 0.5) == doctest::Approx(1.0));
    CHECK(flat_top_weight(1.2, 0.5) == doctest::Approx(0.0));
    CHECK(flat_top_weight(1.0, 0.5) == doctest::Approx(0.0));
    CHECK_THROWS_AS(flat_top_weight(0.3, 0.0), const ConfigError&);
    CHECK_THROWS_AS(flat_top_weight(0.3, 1.0), const ConfigError&);
}

TEST_CASE("lag covariance of a centered constant is zero; lags are bounded") {
    const Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(6, 4);
    CHECK(lag_covariance(zeros, 0).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    const Eigen::MatrixXd series = noise(6, 4, 1);
    CHECK_THROWS_AS(lag_covariance(series, 5), const InsufficientData&);
    CHECK_THROWS_AS(lag_covariance(series, -5), const InsufficientData&);
    CHECK_NOTHROW(lag_covariance(series, 4));
}

TEST_CASE("bandwidth one keeps only the contemporaneous term") {
    const Eigen::MatrixXd series = noise(12, 5, 2);
    const Eigen::MatrixXd lrc = long_run_covariance(series, 0.5, 1.0);
    const Eigen::MatrixXd c0 = lag_covariance(series, 0);
    CHECK((lrc - 0.5 * (c0 + c0.transpose())).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("long-run covariance output is symmetric") {
    const Eigen::MatrixXd series = noise(20, 4, 3);
    const Eigen::MatrixXd lrc = long_run_covariance(series, 0.5, 3.0);
    CHECK((lrc - lrc.transpose()).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("bandwidth selection: range contract, determinism, short-series fallback") {
    const Grid grid = Grid::uniform(0.0, 1.0, 6);
    const Eigen::MatrixXd series = noise(32, 6, 4);
    const BandwidthSelection first = select_bandwidth(series, grid, 0.5);
    const BandwidthSelection second = select_bandwidth(series, grid, 0.5);
    CHECK(first.bandwidth >= 1.0);
    CHECK(first.bandwidth <= 30.0);
    CHECK(first.bandwidth == second.bandwidth);
    CHECK_FALSE(first.fallback);

    const BandwidthSelection tiny = select_bandwidth(noise(6, 6, 5), grid, 0.5);
    CHECK(tiny.fallback);
    CHECK(tiny.bandwidth == doctest::Approx(2.0));
}
