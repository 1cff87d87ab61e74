#include "hdfts/concurrent.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "hdfts/errors.hpp"
#include "hdfts/io_util.hpp"

namespace hdfts {

namespace {

// Design matrix at grid point j: X(i, q) = lambda_q^(i)(u_j).
Eigen::MatrixXd design_at_point(const BackLoadingSet& loadings, Eigen::Index j) {
    const auto N = static_cast<Eigen::Index>(loadings.loadings.size());
    const auto k = static_cast<Eigen::Index>(loadings.k);
    Eigen::MatrixXd x(N, k);
    for (Eigen::Index i = 0; i < N; ++i) {
        x.row(i) = loadings.loadings[static_cast<std::size_t>(i)].col(j).transpose();
    }
    return x;
}

void check_inputs(Eigen::Index n_rows, Eigen::Index n_cols, const BackLoadingSet& loadings,
                  double gamma) {
    if (loadings.k < 1 || loadings.loadings.empty()) {
        throw ConfigError("back loading set is empty");
    }
    if (n_rows != static_cast<Eigen::Index>(loadings.loadings.size())) {
        throw ConfigError("cross-section has " + std::to_string(n_rows) + " rows but " +
                          std::to_string(loadings.loadings.size()) + " loading sections");
    }
    if (n_cols != static_cast<Eigen::Index>(loadings.grid.size())) {
        throw ConfigError("cross-section has " + std::to_string(n_cols) + " grid columns but grid has " +
                          std::to_string(loadings.grid.size()) + " points");
    }
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw ConfigError("gamma must be finite and >= 0");
    }
    if (n_rows < loadings.k) {
        throw UnderdeterminedDesign("cross-section of " + std::to_string(n_rows) +
                                    " sections cannot identify " + std::to_string(loadings.k) +
                                    " factor curves");
    }
}

// Roughness penalty sum_j~interior w_j (f''(u_j))^2 as a quadratic form
// P = D^T diag(w_int) D with D the second-order central difference.
Eigen::MatrixXd penalty_matrix(const Grid& grid) {
    const auto J = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(J, J);
    if (J < 3) {
        return p;
    }
    for (Eigen::Index j = 1; j + 1 < J; ++j) {
        const double gap_lo = grid.point(static_cast<std::size_t>(j)) - grid.point(static_cast<std::size_t>(j - 1));
        const double gap_hi = grid.point(static_cast<std::size_t>(j + 1)) - grid.point(static_cast<std::size_t>(j));
        const double span = gap_lo + gap_hi;
        Eigen::RowVector3d d;
        d << 2.0 / (gap_lo * span), -2.0 / (gap_lo * gap_hi), 2.0 / (gap_hi * span);
        const double w = grid.weight(static_cast<std::size_t>(j));
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                p(j - 1 + a, j - 1 + b) += w * d[a] * d[b];
            }
        }
    }
    return p;
}

constexpr double kRidge = 1e-10;

// Shared solver for one panel: factorizations depend only on the
// loadings (and gamma), so they are built once and reused across
// periods.
class ConcurrentSolver {
public:
    ConcurrentSolver(const BackLoadingSet& loadings, double gamma)
        : loadings_(loadings), gamma_(gamma), k_(loadings.k),
          J_(static_cast<Eigen::Index>(loadings.grid.size())) {
        designs_.reserve(static_cast<std::size_t>(J_));
        for (Eigen::Index j = 0; j < J_; ++j) {
            designs_.push_back(design_at_point(loadings, j));
        }
        if (gamma_ == 0.0) {
            pointwise_.reserve(static_cast<std::size_t>(J_));
            for (Eigen::Index j = 0; j < J_; ++j) {
                Eigen::MatrixXd g = designs_[static_cast<std::size_t>(j)].transpose() *
                                    designs_[static_cast<std::size_t>(j)];
                g.diagonal().array() += kRidge;
                pointwise_.emplace_back(g);
                if (pointwise_.back().info() != Eigen::Success) {
                    throw SingularDesign("normal matrix not factorizable at grid point u=" +
                                         io::format_double(loadings.grid.point(static_cast<std::size_t>(j))));
                }
            }
        } else {
            const auto dim = static_cast<Eigen::Index>(k_) * J_;
            Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
            const Eigen::MatrixXd pen = penalty_matrix(loadings.grid);
            for (Eigen::Index j = 0; j < J_; ++j) {
                const double w = loadings.grid.weight(static_cast<std::size_t>(j));
                const Eigen::MatrixXd g = designs_[static_cast<std::size_t>(j)].transpose() *
                                          designs_[static_cast<std::size_t>(j)];
                for (Eigen::Index q = 0; q < k_; ++q) {
                    for (Eigen::Index q2 = 0; q2 < k_; ++q2) {
                        a(q * J_ + j, q2 * J_ + j) += w * g(q, q2);
                    }
                }
            }
            for (Eigen::Index q = 0; q < k_; ++q) {
                a.block(q * J_, q * J_, J_, J_) += gamma_ * pen;
            }
            a.diagonal().array() += kRidge;
            joint_.compute(a);
            if (joint_.info() != Eigen::Success) {
                throw SingularDesign("joint penalized system not factorizable (gamma=" +
                                     io::format_double(gamma_) + ")");
            }
        }
    }

    // Solve one period's cross-section (N x J) for the k x J factor curves.
    Eigen::MatrixXd solve(const Eigen::MatrixXd& y) const {
        Eigen::MatrixXd curves(k_, J_);
        if (gamma_ == 0.0) {
            for (Eigen::Index j = 0; j < J_; ++j) {
                const Eigen::VectorXd rhs =
                    designs_[static_cast<std::size_t>(j)].transpose() * y.col(j);
                curves.col(j) = pointwise_[static_cast<std::size_t>(j)].solve(rhs);
            }
        } else {
            const auto dim = static_cast<Eigen::Index>(k_) * J_;
            Eigen::VectorXd rhs(dim);
            for (Eigen::Index j = 0; j < J_; ++j) {
                const double w = loadings_.grid.weight(static_cast<std::size_t>(j));
                const Eigen::VectorXd b = designs_[static_cast<std::size_t>(j)].transpose() * y.col(j);
                for (Eigen::Index q = 0; q < k_; ++q) {
                    rhs(q * J_ + j) = w * b(q);
                }
            }
            const Eigen::VectorXd f = joint_.solve(rhs);
            for (Eigen::Index q = 0; q < k_; ++q) {
                curves.row(q) = f.segment(q * J_, J_).transpose();
            }
        }
        if (!curves.allFinite()) {
            throw SingularDesign("factor curves are not finite; design is singular beyond the ridge escape");
        }
        return curves;
    }

    // Effective degrees of freedom tr(A^-1 A0) of the penalized smoother,
    // per period; used by generalized cross-validation.
    double effective_dof() const {
        if (gamma_ == 0.0) {
            double dof = 0.0;
            for (Eigen::Index j = 0; j < J_; ++j) {
                const Eigen::MatrixXd g = designs_[static_cast<std::size_t>(j)].transpose() *
                                          designs_[static_cast<std::size_t>(j)];
                dof += pointwise_[static_cast<std::size_t>(j)].solve(g).trace();
            }
            return dof;
        }
        const auto dim = static_cast<Eigen::Index>(k_) * J_;
        Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(dim, dim);
        for (Eigen::Index j = 0; j < J_; ++j) {
            const double w = loadings_.grid.weight(static_cast<std::size_t>(j));
            const Eigen::MatrixXd g = designs_[static_cast<std::size_t>(j)].transpose() *
                                      designs_[static_cast<std::size_t>(j)];
            for (Eigen::Index q = 0; q < k_; ++q) {
                for (Eigen::Index q2 = 0; q2 < k_; ++q2) {
                    a0(q * J_ + j, q2 * J_ + j) += w * g(q, q2);
                }
            }
        }
        return joint_.solve(a0).trace();
    }

private:
    const BackLoadingSet& loadings_;
    double gamma_;
    Eigen::Index k_;
    Eigen::Index J_;
    std::vector<Eigen::MatrixXd> designs_;
    std::vector<Eigen::LDLT<Eigen::MatrixXd>> pointwise_;
    Eigen::LDLT<Eigen::MatrixXd> joint_;
};

double weighted_rss(const Eigen::MatrixXd& y, const BackLoadingSet& loadings,
                    const Eigen::MatrixXd& curves) {
    const auto J = static_cast<Eigen::Index>(loadings.grid.size());
    double rss = 0.0;
    for (Eigen::Index j = 0; j < J; ++j) {
        const Eigen::MatrixXd x = design_at_point(loadings, j);
        const Eigen::VectorXd r = y.col(j) - x * curves.col(j);
        rss += loadings.grid.weight(static_cast<std::size_t>(j)) * r.squaredNorm();
    }
    return rss;
}

}  // namespace

Eigen::MatrixXd fit_concurrent_cross_section(const Eigen::MatrixXd& y, const BackLoadingSet& loadings,
                                             double gamma) {
    check_inputs(y.rows(), y.cols(), loadings, gamma);
    return ConcurrentSolver(loadings, gamma).solve(y);
}

CommonFactorCurves estimate_common_curves(const CenteredPanel& panel, const BackLoadingSet& loadings,
                                          double gamma) {
    if (panel.grid != loadings.grid) {
        throw ConfigError("panel and loadings use different grids");
    }
    const auto N = panel.n_sections();
    const auto T = panel.n_periods();
    const auto J = static_cast<Eigen::Index>(panel.n_points());
    check_inputs(static_cast<Eigen::Index>(N), J, loadings, gamma);

    const ConcurrentSolver solver(loadings, gamma);
    CommonFactorCurves out;
    out.grid = panel.grid;
    out.gamma = gamma;
    out.curves.reserve(T);
    Eigen::MatrixXd y(static_cast<Eigen::Index>(N), J);
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t i = 0; i < N; ++i) {
            y.row(static_cast<Eigen::Index>(i)) = panel.centered[i].row(static_cast<Eigen::Index>(t));
        }
        try {
            out.curves.push_back(solver.solve(y));
        } catch (const Error& e) {
            throw Error(e.code(), "period index " + std::to_string(t) + ": " + e.what());
        }
    }
    return out;
}

double concurrent_objective(const Eigen::MatrixXd& y, const BackLoadingSet& loadings,
                            const Eigen::MatrixXd& curves, double gamma) {
    check_inputs(y.rows(), y.cols(), loadings, gamma);
    if (curves.rows() != loadings.k || curves.cols() != y.cols()) {
        throw ConfigError("curves have wrong shape for objective evaluation");
    }
    double value = weighted_rss(y, loadings, curves);
    if (gamma > 0.0) {
        const Eigen::MatrixXd pen = penalty_matrix(loadings.grid);
        for (Eigen::Index q = 0; q < curves.rows(); ++q) {
            value += gamma * curves.row(q) * pen * curves.row(q).transpose();
        }
    }
    return value;
}

double select_gamma_gcv(const CenteredPanel& panel, const BackLoadingSet& loadings) {
    if (panel.grid != loadings.grid) {
        throw ConfigError("panel and loadings use different grids");
    }
    const auto N = panel.n_sections();
    const auto T = panel.n_periods();
    const auto J = static_cast<Eigen::Index>(panel.n_points());
    check_inputs(static_cast<Eigen::Index>(N), J, loadings, 0.0);

    std::vector<double> candidates{0.0};
    for (int e = -6; e <= 2; ++e) {
        candidates.push_back(std::pow(10.0, e));
    }

    const double cells = static_cast<double>(N) * static_cast<double>(J);
    double best_gamma = 0.0;
    double best_score = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd y(static_cast<Eigen::Index>(N), J);
    for (double gamma : candidates) {
        const ConcurrentSolver solver(loadings, gamma);
        const double dof = solver.effective_dof();
        if (!(dof < cells)) {
            continue;  // saturated smoother; GCV undefined
        }
        double rss = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            for (std::size_t i = 0; i < N; ++i) {
                y.row(static_cast<Eigen::Index>(i)) =
                    panel.centered[i].row(static_cast<Eigen::Index>(t));
            }
            rss += weighted_rss(y, loadings, solver.solve(y));
        }
        const double denom = 1.0 - dof / cells;
        const double score = rss / (static_cast<double>(T) * cells * denom * denom);
        if (score < best_score) {
            best_score = score;
            best_gamma = gamma;
        }
    }
    return best_gamma;
}

}  // namespace hdfts
