#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hdfts/concurrent.hpp"
#include "hdfts/fpca.hpp"
#include "hdfts/grid.hpp"

namespace hdfts {

// Lag-h auto-cross-covariance surface between factor curves l and j:
//   C_{h,lj}(u, v) = (1 / (T - h)) * sum_{t=1}^{T-h} F_{t,l}(u) F_{t+h,j}(v).
// Curves enter as estimated (not re-centered); demean subtracts the
// time mean of each factor curve first. Indices l, j are 0-based.
Eigen::MatrixXd factor_auto_cross_cov(const CommonFactorCurves& curves, int h, int l, int j,
                                      bool demean = false);

// Positive semidefinite operator accumulating the squared
// auto-cross-covariances over lags 1..h0 and all component pairs:
//   M(u, v) = sum_h sum_{l,j} int C_{h,lj}(u, z) C_{h,lj}(v, z) dz.
struct MOperator {
    Grid grid;
    Eigen::MatrixXd surface;  // J x J, symmetric PSD
    int h0 = 1;
};

MOperator build_m_operator(const CommonFactorCurves& curves, int h0, bool demean = false);

// Leading eigenfunctions of M: the front loading curves phi_p(u) shared
// by every section, with r chosen by the cumulative-share rule (or
// fixed_r if > 0).
struct FrontLoadings {
    Grid grid;
    int r = 0;
    Eigen::MatrixXd curves;    // r x J
    Eigen::VectorXd spectrum;  // full descending spectrum of M
};

FrontLoadings estimate_front_loadings(const MOperator& m, double P, int fixed_r = 0);

// Factor matrices F_t[p, q] = int phi_p(u) F_{t,q}(u) du by quadrature.
std::vector<Eigen::MatrixXd> project_factor_matrices(const FrontLoadings& front,
                                                     const CommonFactorCurves& curves);

}  // namespace hdfts
