#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hdfts/grid.hpp"
#include "hdfts/panel.hpp"

namespace hdfts {

// Leading part of the spectrum of a covariance surface. Eigenfunctions
// are stored as rows (m x J) and are orthonormal in the
// quadrature-weighted L2 inner product; eigenvalues are descending and
// clipped at zero.
struct EigenSystem {
    Eigen::VectorXd eigenvalues;     // length m, descending, >= 0
    Eigen::MatrixXd eigenfunctions;  // m x J
};

// Solve the weighted eigenproblem for a symmetric covariance surface on
// the given grid, returning the leading m pairs. Sign convention: each
// eigenfunction integrates to a nonnegative value; when the integral is
// within 1e-10 of zero, the first entry of magnitude above 1e-10 is
// positive.
EigenSystem eigen_decompose_surface(const Eigen::MatrixXd& surface, const Grid& grid, int m);

// Smallest k whose leading eigenvalues reach a fraction P of the total.
// Throws DegenerateSpectrum when the spectrum carries no mass.
int select_component_count(const Eigen::VectorXd& eigenvalues_descending, double P);

// Bandwidth policy for the per-section long-run covariances: a fixed
// value, or 0 for adaptive plug-in selection per section.
struct KernelPolicy {
    double nu = 0.5;
    double fixed_bandwidth = 0.0;
};

// How to fill loading rows of sections that need fewer components than
// the panel-wide count k: zero rows (default) keep those sections out of
// the extra dimensions; Eigen keeps their higher-order eigenfunctions.
enum class PadPolicy { Zero, Eigen };

struct BackLoadingSet {
    Grid grid;
    int k = 0;                               // panel-wide count: max over sections
    std::vector<int> section_counts;         // per-section selected counts
    std::vector<double> bandwidths;          // per-section long-run bandwidths
    std::vector<unsigned char> bandwidth_fallbacks;
    std::vector<Eigen::VectorXd> spectra;    // per-section full eigenvalue vectors
    std::vector<Eigen::MatrixXd> loadings;   // N matrices, each k x J
};

// Per-section dynamic principal components of a centered panel: long-run
// covariance -> weighted eigendecomposition -> per-section count by the
// cumulative-share rule (or fixed_k if > 0) -> panel-wide k = max count,
// padded per policy.
BackLoadingSet estimate_back_loadings(const CenteredPanel& panel, const KernelPolicy& kernel,
                                      double P, PadPolicy pad = PadPolicy::Zero, int fixed_k = 0);

}  // namespace hdfts
