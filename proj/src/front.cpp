#include "hdfts/front.hpp"

#include <string>

#include "hdfts/errors.hpp"

namespace hdfts {

namespace {

// Time mean of each factor curve, k x J.
Eigen::MatrixXd curve_means(const CommonFactorCurves& curves) {
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(curves.curves.front().rows(),
                                                 curves.curves.front().cols());
    for (const auto& c : curves.curves) {
        mean += c;
    }
    return mean / static_cast<double>(curves.curves.size());
}

void check_curves(const CommonFactorCurves& curves) {
    if (curves.curves.empty()) {
        throw ConfigError("factor curves are empty");
    }
    if (curves.curves.front().cols() != static_cast<Eigen::Index>(curves.grid.size())) {
        throw ConfigError("factor curves do not match their grid");
    }
}

}  // namespace

Eigen::MatrixXd factor_auto_cross_cov(const CommonFactorCurves& curves, int h, int l, int j,
                                      bool demean) {
    check_curves(curves);
    const auto T = static_cast<Eigen::Index>(curves.n_periods());
    const int k = curves.n_components();
    if (h < 1 || h > T - 2) {
        throw ConfigError("lag h=" + std::to_string(h) + " outside [1, T-2] with T=" +
                          std::to_string(T));
    }
    if (l < 0 || l >= k || j < 0 || j >= k) {
        throw ConfigError("component pair (" + std::to_string(l) + ", " + std::to_string(j) +
                          ") outside [0, " + std::to_string(k) + ")");
    }
    Eigen::MatrixXd mean;
    if (demean) {
        mean = curve_means(curves);
    }
    const auto J = static_cast<Eigen::Index>(curves.grid.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(J, J);
    for (Eigen::Index t = 0; t + h < T; ++t) {
        Eigen::RowVectorXd a = curves.curves[static_cast<std::size_t>(t)].row(l);
        Eigen::RowVectorXd b = curves.curves[static_cast<std::size_t>(t + h)].row(j);
        if (demean) {
            a -= mean.row(l);
            b -= mean.row(j);
        }
        c.noalias() += a.transpose() * b;
    }
    return c / static_cast<double>(T - h);
}

MOperator build_m_operator(const CommonFactorCurves& curves, int h0, bool demean) {
    check_curves(curves);
    const auto T = static_cast<Eigen::Index>(curves.n_periods());
    if (h0 < 1 || h0 > T - 2) {
        throw ConfigError("h0=" + std::to_string(h0) + " outside [1, T-2] with T=" +
                          std::to_string(T));
    }
    const int k = curves.n_components();
    const auto J = static_cast<Eigen::Index>(curves.grid.size());
    MOperator out;
    out.grid = curves.grid;
    out.h0 = h0;
    out.surface = Eigen::MatrixXd::Zero(J, J);
    const auto& w = curves.grid.weights();
    for (int h = 1; h <= h0; ++h) {
        for (int l = 0; l < k; ++l) {
            for (int j = 0; j < k; ++j) {
                const Eigen::MatrixXd c = factor_auto_cross_cov(curves, h, l, j, demean);
                // int C(u, z) C(v, z) dz = C W C^T, PSD by construction.
                out.surface.noalias() += c * w.asDiagonal() * c.transpose();
            }
        }
    }
    out.surface = 0.5 * (out.surface + out.surface.transpose());
    return out;
}

FrontLoadings estimate_front_loadings(const MOperator& m, double P, int fixed_r) {
    const auto J = static_cast<Eigen::Index>(m.grid.size());
    if (fixed_r < 0 || fixed_r > J) {
        throw ConfigError("fixed r=" + std::to_string(fixed_r) + " outside [0, " +
                          std::to_string(J) + "]");
    }
    EigenSystem eig;
    try {
        eig = eigen_decompose_surface(m.surface, m.grid, static_cast<int>(J));
    } catch (const Error& e) {
        throw Error(e.code(), std::string("front loading eigenproblem: ") + e.what());
    }
    FrontLoadings out;
    out.grid = m.grid;
    out.spectrum = eig.eigenvalues;
    if (fixed_r > 0) {
        out.r = fixed_r;
    } else if (eig.eigenvalues.sum() > 0.0) {
        out.r = select_component_count(eig.eigenvalues, P);
    } else {
        // All-zero operator (the factor curves carry no serial dependence at
        // the chosen lags, e.g. a constant panel): keep one zero-weight
        // direction so degenerate inputs still flow through to forecasts.
        out.r = 1;
    }
    out.curves = eig.eigenfunctions.topRows(out.r);
    return out;
}

std::vector<Eigen::MatrixXd> project_factor_matrices(const FrontLoadings& front,
                                                     const CommonFactorCurves& curves) {
    check_curves(curves);
    if (front.grid != curves.grid) {
        throw ConfigError("front loadings and factor curves use different grids");
    }
    if (front.r < 1) {
        throw ConfigError("front loadings are empty");
    }
    // F_t = Phi W F_curves^T with quadrature weights W absorbed once.
    const Eigen::MatrixXd weighted_front = front.curves * curves.grid.weights().asDiagonal();
    std::vector<Eigen::MatrixXd> out;
    out.reserve(curves.n_periods());
    for (const auto& c : curves.curves) {
        out.push_back(weighted_front * c.transpose());  // r x k
    }
    return out;
}

}  // namespace hdfts
