#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hdfts/panel.hpp"

namespace hdfts {

// Synthetic two-fold factor panel on the unit-interval grid of 101
// points. Two front loading curves, two back loading curves per section
// (phase-shifted by section index), and a 2 x 2 factor matrix whose rows
// follow independent VAR(1) processes started from zero and burned in.
// The second row's coefficient matrix has a unit eigenvalue by
// construction; stable_row2 swaps in a stationary alternative.
struct DgpConfig {
    int n_sections = 10;
    int n_periods = 20;
    double noise_sd = 0.5;
    std::uint64_t seed = 1;
    int burn_in = 100;
    bool stable_row2 = false;
};

struct SimulationTruth {
    Eigen::MatrixXd front;                 // 2 x J
    std::vector<Eigen::MatrixXd> back;     // N matrices, each 2 x J
    std::vector<Eigen::MatrixXd> factors;  // T matrices, each 2 x 2
};

struct SimulatedPanel {
    FunctionalPanel panel;
    SimulationTruth truth;
};

SimulatedPanel simulate_dgp(const DgpConfig& config);

}  // namespace hdfts
