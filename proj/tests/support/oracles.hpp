#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace testsupport {

struct CaseResult {
    bool pass = false;
    std::string detail;
};

struct Case {
    std::string name;
    std::function<CaseResult()> run;
};

// Library results rechecked against independent brute-force
// reimplementations: flat-loop covariance sums, per-grid-point normal
// equations, matrix-power forecasts, dense eigensolvers, hand summations,
// refined-quadrature integrals, and small Monte Carlo contracts. Every
// case is deterministic (fixed seeds).
const std::vector<Case>& oracle_registry();

// Structural properties that must hold on arbitrary well-formed inputs:
// kernel shape, quadrature orthonormality, operator symmetry and positive
// semidefiniteness, regression residual orthogonality, score monotonicity,
// determinism under a fixed seed, parallel/serial equality, and
// config-echo reproducibility.
const std::vector<Case>& invariant_registry();

// Self-deleting scratch directory for CLI round trips.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace testsupport
