#include "hdfts/panel.hpp"

#include <cmath>
#include <unordered_set>

#include "hdfts/errors.hpp"

namespace hdfts {

std::size_t FunctionalPanel::section_index(const std::string& id) const {
    for (std::size_t i = 0; i < section_ids.size(); ++i) {
        if (section_ids[i] == id) {
            return i;
        }
    }
    throw ConfigError("unknown section id '" + id + "'");
}

void FunctionalPanel::validate() const {
    if (section_ids.empty()) {
        throw ConfigError("panel has no sections");
    }
    if (period_ids.empty()) {
        throw ConfigError("panel has no periods");
    }
    if (grid.size() < 2) {
        throw ConfigError("panel grid has fewer than 2 points");
    }
    if (values.size() != section_ids.size()) {
        throw ConfigError("panel has " + std::to_string(section_ids.size()) + " section ids but " +
                          std::to_string(values.size()) + " value matrices");
    }
    std::unordered_set<std::string> seen;
    for (const auto& id : section_ids) {
        if (!seen.insert(id).second) {
            throw ConfigError("duplicate section id '" + id + "'");
        }
    }
    for (std::size_t t = 1; t < period_ids.size(); ++t) {
        if (period_ids[t] <= period_ids[t - 1]) {
            throw ConfigError("period ids must be strictly ascending");
        }
    }
    const auto T = static_cast<Eigen::Index>(period_ids.size());
    const auto J = static_cast<Eigen::Index>(grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].rows() != T || values[i].cols() != J) {
            throw ConfigError("section '" + section_ids[i] + "' has shape " +
                              std::to_string(values[i].rows()) + "x" + std::to_string(values[i].cols()) +
                              ", expected " + std::to_string(T) + "x" + std::to_string(J));
        }
    }
}

CenteredPanel center(const FunctionalPanel& panel) {
    panel.validate();
    if (panel.n_periods() < 2) {
        throw InsufficientData("centering needs at least two periods, got " +
                               std::to_string(panel.n_periods()));
    }
    CenteredPanel out;
    out.grid = panel.grid;
    out.section_ids = panel.section_ids;
    out.period_ids = panel.period_ids;
    const auto N = panel.n_sections();
    out.means.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(panel.n_points()));
    out.centered.reserve(N);
    for (std::size_t i = 0; i < N; ++i) {
        const Eigen::RowVectorXd mean = panel.values[i].colwise().mean();
        out.means.row(static_cast<Eigen::Index>(i)) = mean;
        out.centered.push_back(panel.values[i].rowwise() - mean);
    }
    return out;
}

FunctionalPanel log_transform(const FunctionalPanel& panel, double floor) {
    panel.validate();
    if (!(floor > 0.0)) {
        throw ConfigError("log transform floor must be positive, got " + std::to_string(floor));
    }
    FunctionalPanel out = panel;
    for (std::size_t i = 0; i < panel.values.size(); ++i) {
        const auto& m = panel.values[i];
        for (Eigen::Index t = 0; t < m.rows(); ++t) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                if (m(t, j) < 0.0) {
                    throw DomainError("log transform needs nonnegative values; section '" +
                                      panel.section_ids[i] + "', period " +
                                      std::to_string(panel.period_ids[static_cast<std::size_t>(t)]) +
                                      ", point " + std::to_string(panel.grid.point(static_cast<std::size_t>(j))) +
                                      " has value " + std::to_string(m(t, j)));
                }
            }
        }
        out.values[i] = m.array().max(floor).log();
    }
    return out;
}

FunctionalPanel exp_transform(const FunctionalPanel& panel) {
    panel.validate();
    FunctionalPanel out = panel;
    for (auto& m : out.values) {
        m = m.array().exp();
    }
    return out;
}

FunctionalPanel truncate_periods(const FunctionalPanel& panel, std::size_t n_keep) {
    panel.validate();
    if (n_keep < 1 || n_keep > panel.n_periods()) {
        throw ConfigError("truncate_periods: n_keep=" + std::to_string(n_keep) + " outside [1, " +
                          std::to_string(panel.n_periods()) + "]");
    }
    FunctionalPanel out;
    out.grid = panel.grid;
    out.section_ids = panel.section_ids;
    out.period_ids.assign(panel.period_ids.begin(),
                          panel.period_ids.begin() + static_cast<std::ptrdiff_t>(n_keep));
    out.values.reserve(panel.values.size());
    for (const auto& m : panel.values) {
        out.values.push_back(m.topRows(static_cast<Eigen::Index>(n_keep)));
    }
    return out;
}

}  // namespace hdfts
