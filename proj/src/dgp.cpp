#include "hdfts/dgp.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "hdfts/errors.hpp"
#include "hdfts/rng.hpp"

namespace hdfts {

namespace {

constexpr int kGridSize = 101;

// One VAR(1) path of length n after burn-in from the zero state, with
// innovations N(0, Sigma) drawn through the Cholesky factor.
std::vector<Eigen::Vector2d> var1_path(const Eigen::Matrix2d& a, const Eigen::Matrix2d& chol,
                                       int burn_in, int n, std::mt19937_64& eng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::Vector2d state = Eigen::Vector2d::Zero();
    std::vector<Eigen::Vector2d> path;
    path.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < burn_in + n; ++t) {
        Eigen::Vector2d z;
        z << normal(eng), normal(eng);
        state = a * state + chol * z;
        if (t >= burn_in) {
            path.push_back(state);
        }
    }
    return path;
}

}  // namespace

SimulatedPanel simulate_dgp(const DgpConfig& config) {
    if (config.n_sections < 4 || config.n_periods < 4) {
        throw ConfigError("simulation needs N >= 4 and T >= 4");
    }
    if (!(config.noise_sd >= 0.0)) {
        throw ConfigError("noise_sd must be >= 0");
    }
    if (config.burn_in < 0) {
        throw ConfigError("burn_in must be >= 0");
    }

    const int N = config.n_sections;
    const int T = config.n_periods;
    const double pi = std::numbers::pi;

    SimulatedPanel out;
    out.panel.grid = Grid::uniform(0.0, 1.0, kGridSize);
    const auto& u = out.panel.grid.points();

    out.truth.front.resize(2, kGridSize);
    for (int j = 0; j < kGridSize; ++j) {
        out.truth.front(0, j) = std::sin(4.0 * pi * u[j]);
        out.truth.front(1, j) = std::cos(4.0 * pi * u[j]);
    }
    out.truth.back.reserve(static_cast<std::size_t>(N));
    for (int i = 1; i <= N; ++i) {
        Eigen::MatrixXd lam(2, kGridSize);
        const double phase = pi * static_cast<double>(i) / 4.0;
        for (int j = 0; j < kGridSize; ++j) {
            lam(0, j) = std::cos(2.0 * pi * u[j] + phase);
            lam(1, j) = std::sin(2.0 * pi * u[j] + phase);
        }
        out.truth.back.push_back(std::move(lam));
    }

    Eigen::Matrix2d a_row1;
    a_row1 << 0.7, 0.2, 0.2, 0.7;
    Eigen::Matrix2d a_row2;
    if (config.stable_row2) {
        a_row2 << 0.5, -0.25, -0.25, 0.5;
    } else {
        a_row2 << 0.5, -0.25, -1.0, 0.5;
    }
    Eigen::Matrix2d sigma;
    sigma << 1.0, 0.5, 0.5, 1.0;
    const Eigen::Matrix2d chol = sigma.llt().matrixL();

    auto eng_row1 = rng::engine(config.seed, {rng::kFactorRow, 1});
    auto eng_row2 = rng::engine(config.seed, {rng::kFactorRow, 2});
    const auto row1 = var1_path(a_row1, chol, config.burn_in, T, eng_row1);
    const auto row2 = var1_path(a_row2, chol, config.burn_in, T, eng_row2);

    out.truth.factors.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        Eigen::MatrixXd f(2, 2);
        f.row(0) = row1[static_cast<std::size_t>(t)].transpose();
        f.row(1) = row2[static_cast<std::size_t>(t)].transpose();
        out.truth.factors.push_back(std::move(f));
    }

    out.panel.section_ids.reserve(static_cast<std::size_t>(N));
    for (int i = 1; i <= N; ++i) {
        out.panel.section_ids.push_back(std::to_string(i));
    }
    out.panel.period_ids.reserve(static_cast<std::size_t>(T));
    for (int t = 1; t <= T; ++t) {
        out.panel.period_ids.push_back(t);
    }

    out.panel.values.assign(static_cast<std::size_t>(N), Eigen::MatrixXd(T, kGridSize));
    for (int t = 0; t < T; ++t) {
        // g(j, q) = sum_p phi_p(u_j) F_t[p, q]
        const Eigen::MatrixXd g =
            out.truth.front.transpose() * out.truth.factors[static_cast<std::size_t>(t)];
        for (int i = 0; i < N; ++i) {
            out.panel.values[static_cast<std::size_t>(i)].row(t) =
                (out.truth.back[static_cast<std::size_t>(i)].cwiseProduct(g.transpose()))
                    .colwise()
                    .sum();
        }
    }
    if (config.noise_sd > 0.0) {
        auto eng_noise = rng::engine(config.seed, {rng::kNoise});
        std::normal_distribution<double> normal(0.0, config.noise_sd);
        for (int i = 0; i < N; ++i) {
            auto& m = out.panel.values[static_cast<std::size_t>(i)];
            for (int t = 0; t < T; ++t) {
                for (int j = 0; j < kGridSize; ++j) {
                    m(t, j) += normal(eng_noise);
                }
            }
        }
    }
    return out;
}

}  // namespace hdfts
