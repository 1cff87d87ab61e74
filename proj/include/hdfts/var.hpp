#pragma once

#include <Eigen/Dense>
#include <vector>

namespace hdfts {

// Least-squares VAR(p) with intercept on vectorized factor matrices.
struct VarModel {
    int order = 1;                        // p
    std::vector<Eigen::MatrixXd> coeffs;  // p matrices, each d x d
    Eigen::VectorXd intercept;            // d
    Eigen::MatrixXd innovation_cov;       // d x d, symmetric PSD
    double aic = 0.0;
    bool order_capped = false;            // max_order was reduced to fit T
};

// Column-major vectorization of an r x k matrix and its inverse.
Eigen::VectorXd vectorize_factor(const Eigen::MatrixXd& f);
Eigen::MatrixXd reshape_factor(const Eigen::VectorXd& v, int r, int k);

// Fit VAR(p) for p = 1..max_order by least squares and keep the AIC
// minimizer (ties break to the smaller order). Orders are compared on
// the common sample that the largest candidate leaves available, then
// the winner is refitted on its own full sample. max_order shrinks
// automatically when T is small.
VarModel fit_var(const std::vector<Eigen::VectorXd>& series, int max_order);
VarModel fit_var_matrices(const std::vector<Eigen::MatrixXd>& factors, int max_order);

// Iterated h-step mean forecasts. history holds at least order vectors,
// oldest first; returns forecasts for steps 1..h.
std::vector<Eigen::VectorXd> forecast_factors(const VarModel& model,
                                              const std::vector<Eigen::VectorXd>& history, int h);

}  // namespace hdfts
