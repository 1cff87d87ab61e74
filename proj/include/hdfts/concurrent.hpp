#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hdfts/fpca.hpp"
#include "hdfts/panel.hpp"

namespace hdfts {

// Common factor curves recovered by per-period concurrent regression of
// the centered panel on the back loadings. curves[t] is k x J, row q
// holding the q-th factor curve in period t.
struct CommonFactorCurves {
    Grid grid;
    std::vector<Eigen::MatrixXd> curves;  // T matrices, each k x J
    double gamma = 0.0;

    std::size_t n_periods() const { return curves.size(); }
    int n_components() const { return curves.empty() ? 0 : static_cast<int>(curves.front().rows()); }
};

// One period's cross-sectional fit: minimize the quadrature sum of
// squared residuals sum_i int (y^(i)(u) - sum_q lambda_q^(i)(u) f_q(u))^2 du
// plus gamma * sum_q int (f_q'')^2 du (second differences on the grid).
// With gamma = 0 the problem decouples into ordinary least squares at
// each grid point; a 1e-10 ridge on the normal matrix guards the zero
// columns introduced by padded loadings.
Eigen::MatrixXd fit_concurrent_cross_section(const Eigen::MatrixXd& y, const BackLoadingSet& loadings,
                                             double gamma);

// Stack the per-period fits for the whole panel.
CommonFactorCurves estimate_common_curves(const CenteredPanel& panel, const BackLoadingSet& loadings,
                                          double gamma);

// Value of the penalized objective attained by a candidate solution;
// used by the smoothing-parameter search and by tests.
double concurrent_objective(const Eigen::MatrixXd& y, const BackLoadingSet& loadings,
                            const Eigen::MatrixXd& curves, double gamma);

// Generalized cross-validation over a fixed log grid of gamma values
// (0 and 1e-6 .. 1e2 by decades); returns the minimizer.
double select_gamma_gcv(const CenteredPanel& panel, const BackLoadingSet& loadings);

}  // namespace hdfts
