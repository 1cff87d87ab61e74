#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "hdfts/grid.hpp"

namespace hdfts {

// A panel of functional time series: N sections, each observed over the
// same T periods on the same grid of J points. values[i] is T x J, row t
// holding section i's curve in period t.
struct FunctionalPanel {
    Grid grid;
    std::vector<std::string> section_ids;   // N, unique, sorted
    std::vector<std::int64_t> period_ids;   // T, ascending
    std::vector<Eigen::MatrixXd> values;    // N matrices, each T x J

    std::size_t n_sections() const { return section_ids.size(); }
    std::size_t n_periods() const { return period_ids.size(); }
    std::size_t n_points() const { return grid.size(); }

    // Index of a section id; throws ConfigError if absent.
    std::size_t section_index(const std::string& id) const;

    // Throws ConfigError if dimensions are inconsistent or ids are
    // duplicated / out of order.
    void validate() const;
};

// Panel with per-section time means removed. The means matrix is N x J;
// centered[i] is T x J with centered[i](t, j) = values[i](t, j) - means(i, j).
struct CenteredPanel {
    Grid grid;
    std::vector<std::string> section_ids;
    std::vector<std::int64_t> period_ids;
    std::vector<Eigen::MatrixXd> centered;  // N matrices, each T x J
    Eigen::MatrixXd means;                  // N x J

    std::size_t n_sections() const { return section_ids.size(); }
    std::size_t n_periods() const { return period_ids.size(); }
    std::size_t n_points() const { return grid.size(); }
};

// Remove per-section time means.
CenteredPanel center(const FunctionalPanel& panel);

// Elementwise natural log, for rate-like data: ln(max(value, floor)).
// Throws DomainError naming the first offending cell if any value is
// negative.
FunctionalPanel log_transform(const FunctionalPanel& panel, double floor = 1e-8);

// Elementwise exp; inverse of log_transform.
FunctionalPanel exp_transform(const FunctionalPanel& panel);

// Keep only the first n_keep periods (an expanding-window training slice).
FunctionalPanel truncate_periods(const FunctionalPanel& panel, std::size_t n_keep);

}  // namespace hdfts
