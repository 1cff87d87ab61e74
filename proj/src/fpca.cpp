#include "hdfts/fpca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hdfts/errors.hpp"
#include "hdfts/longrun.hpp"
#include "hdfts/parallel.hpp"

namespace hdfts {

EigenSystem eigen_decompose_surface(const Eigen::MatrixXd& surface, const Grid& grid, int m) {
    const auto J = static_cast<Eigen::Index>(grid.size());
    if (surface.rows() != J || surface.cols() != J) {
        throw ConfigError("surface is " + std::to_string(surface.rows()) + "x" +
                          std::to_string(surface.cols()) + " but grid has " + std::to_string(J) +
                          " points");
    }
    if (m < 1 || m > J) {
        throw ConfigError("component request m=" + std::to_string(m) + " outside [1, " +
                          std::to_string(J) + "]");
    }
    const double scale = surface.cwiseAbs().maxCoeff();
    const double asym = (surface - surface.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * (1.0 + scale)) {
        throw ConfigError("surface is not symmetric (max asymmetry " + std::to_string(asym) + ")");
    }

    // Reduce the weighted problem C W g = lambda g to a symmetric one:
    // with D = diag(sqrt(w)), B = D C D has the same eigenvalues and
    // eigenvectors g = D e that are Euclidean-orthonormal, so e = g / sqrt(w)
    // is orthonormal in the quadrature inner product.
    const Eigen::VectorXd sqrt_w = grid.weights().array().sqrt();
    Eigen::MatrixXd b = sqrt_w.asDiagonal() * surface * sqrt_w.asDiagonal();
    b = 0.5 * (b + b.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
    if (solver.info() != Eigen::Success) {
        throw DegenerateSpectrum("eigendecomposition failed to converge");
    }

    EigenSystem out;
    out.eigenvalues.resize(m);
    out.eigenfunctions.resize(m, J);
    for (int p = 0; p < m; ++p) {
        const Eigen::Index src = J - 1 - p;  // solver orders ascending
        out.eigenvalues[p] = std::max(0.0, solver.eigenvalues()[src]);
        Eigen::VectorXd e = solver.eigenvectors().col(src).array() / sqrt_w.array();
        const double integral = grid.integrate(e);
        if (integral <= -1e-10) {
            e = -e;
        } else if (integral < 1e-10) {
            for (Eigen::Index j = 0; j < J; ++j) {
                if (std::abs(e[j]) > 1e-10) {
                    if (e[j] < 0.0) {
                        e = -e;
                    }
                    break;
                }
            }
        }
        out.eigenfunctions.row(p) = e.transpose();
    }
    return out;
}

int select_component_count(const Eigen::VectorXd& eigenvalues_descending, double P) {
    if (!(P > 0.0) || P > 1.0) {
        throw ConfigError("cumulative share P must lie in (0, 1], got " + std::to_string(P));
    }
    if (eigenvalues_descending.size() == 0) {
        throw DegenerateSpectrum("empty spectrum");
    }
    double total = 0.0;
    for (Eigen::Index p = 0; p < eigenvalues_descending.size(); ++p) {
        total += std::max(0.0, eigenvalues_descending[p]);
    }
    if (!(total > 0.0)) {
        throw DegenerateSpectrum("all eigenvalues are zero; no signal to retain");
    }
    double cumulative = 0.0;
    for (Eigen::Index p = 0; p < eigenvalues_descending.size(); ++p) {
        cumulative += std::max(0.0, eigenvalues_descending[p]);
        if (cumulative / total >= P) {
            return static_cast<int>(p) + 1;
        }
    }
    return static_cast<int>(eigenvalues_descending.size());
}

BackLoadingSet estimate_back_loadings(const CenteredPanel& panel, const KernelPolicy& kernel,
                                      double P, PadPolicy pad, int fixed_k) {
    const auto N = panel.n_sections();
    const auto J = static_cast<Eigen::Index>(panel.n_points());
    if (N == 0) {
        throw ConfigError("panel has no sections");
    }
    if (panel.n_periods() < 4) {
        throw InsufficientData("back loadings need at least 4 periods, got " +
                               std::to_string(panel.n_periods()));
    }
    if (fixed_k < 0 || fixed_k > J) {
        throw ConfigError("fixed k=" + std::to_string(fixed_k) + " outside [0, " +
                          std::to_string(J) + "]");
    }
    if (kernel.fixed_bandwidth != 0.0 && !(kernel.fixed_bandwidth >= 1.0)) {
        throw ConfigError("fixed bandwidth must be >= 1 (or 0 for adaptive)");
    }

    struct SectionResult {
        EigenSystem eig;
        double bandwidth = 0.0;
        bool fallback = false;
        int count = 0;
    };
    std::vector<SectionResult> results(N);

    // Sections of one panel share their temporal dynamics, so the kernel
    // bandwidth is pooled: each section proposes a bandwidth and the (lower)
    // median is applied everywhere. Pooling keeps a single noisy section from
    // degrading the joint loading system, which matters because the retained
    // component count is the maximum over sections.
    if (kernel.fixed_bandwidth > 0.0) {
        for (auto& r : results) {
            r.bandwidth = kernel.fixed_bandwidth;
        }
    } else {
        parallel_for(N, [&](std::size_t i) {
            try {
                const auto sel = select_bandwidth(panel.centered[i], panel.grid, kernel.nu);
                results[i].bandwidth = sel.bandwidth;
                results[i].fallback = sel.fallback;
            } catch (const Error& e) {
                throw Error(e.code(), "section '" + panel.section_ids[i] + "': " + e.what());
            }
        });
        std::vector<double> proposed;
        proposed.reserve(N);
        for (const auto& r : results) {
            proposed.push_back(r.bandwidth);
        }
        std::sort(proposed.begin(), proposed.end());
        const double pooled = proposed[(proposed.size() - 1) / 2];
        for (auto& r : results) {
            r.bandwidth = pooled;
        }
    }

    parallel_for(N, [&](std::size_t i) {
        try {
            auto& r = results[i];
            const Eigen::MatrixXd c = long_run_covariance(panel.centered[i], kernel.nu, r.bandwidth);
            r.eig = eigen_decompose_surface(c, panel.grid, static_cast<int>(J));
            if (fixed_k > 0) {
                r.count = fixed_k;
            } else if (r.eig.eigenvalues.sum() > 0.0) {
                r.count = select_component_count(r.eig.eigenvalues, P);
            } else {
                // Zero-variance section (e.g. constant in time): keep a single
                // zero-weight direction so panel-level shapes stay valid; the
                // downstream regression assigns it a zero coefficient.
                r.count = 1;
            }
        } catch (const Error& e) {
            throw Error(e.code(), "section '" + panel.section_ids[i] + "': " + e.what());
        }
    });

    BackLoadingSet out;
    out.grid = panel.grid;
    out.section_counts.resize(N);
    out.bandwidths.resize(N);
    out.bandwidth_fallbacks.resize(N);
    out.spectra.resize(N);
    int k = 1;
    for (std::size_t i = 0; i < N; ++i) {
        out.section_counts[i] = results[i].count;
        out.bandwidths[i] = results[i].bandwidth;
        out.bandwidth_fallbacks[i] = results[i].fallback ? 1 : 0;
        out.spectra[i] = results[i].eig.eigenvalues;
        k = std::max(k, results[i].count);
    }
    out.k = k;
    out.loadings.reserve(N);
    for (std::size_t i = 0; i < N; ++i) {
        Eigen::MatrixXd rows = results[i].eig.eigenfunctions.topRows(k);
        if (pad == PadPolicy::Zero) {
            for (int p = results[i].count; p < k; ++p) {
                rows.row(p).setZero();
            }
        }
        out.loadings.push_back(std::move(rows));
    }

    // Orient loadings coherently across sections. Each section's eigenfunctions
    // are defined only up to sign, and the per-section convention can flip
    // orientation between otherwise similar sections. The cross-section
    // regression that recovers the common factor curves regresses on these
    // loadings jointly, so incoherent signs rotate the design out of the common
    // subspace and lose signal. Chain each component to the nearest preceding
    // section that carries it, flipping when the quadrature inner product is
    // negative; forecasts and all downstream quantities are invariant to the
    // joint sign of (loading, factor), so this only improves the regression.
    const Eigen::VectorXd& w = out.grid.weights();
    for (int q = 0; q < k; ++q) {
        Eigen::Index last = -1;
        for (std::size_t i = 0; i < N; ++i) {
            if (q >= out.section_counts[i] && pad == PadPolicy::Zero) {
                continue;
            }
            if (last >= 0) {
                const double ip =
                    w.dot(out.loadings[i].row(q).cwiseProduct(out.loadings[last].row(q)).transpose());
                if (ip < 0.0) {
                    out.loadings[i].row(q) = -out.loadings[i].row(q);
                }
            }
            last = static_cast<Eigen::Index>(i);
        }
    }
    return out;
}

}  // namespace hdfts
