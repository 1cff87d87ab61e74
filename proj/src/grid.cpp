#include "hdfts/grid.hpp"

#include <utility>

#include "hdfts/errors.hpp"

namespace hdfts {

Grid::Grid(std::vector<double> points) {
    if (points.size() < 2) {
        throw ConfigError("grid needs at least 2 points, got " + std::to_string(points.size()));
    }
    for (std::size_t j = 1; j < points.size(); ++j) {
        if (!(points[j] > points[j - 1])) {
            throw ConfigError("grid points must be strictly increasing (violation at index " +
                              std::to_string(j) + ")");
        }
    }
    const auto n = static_cast<Eigen::Index>(points.size());
    points_ = Eigen::Map<const Eigen::VectorXd>(points.data(), n);
    weights_ = Eigen::VectorXd::Zero(n);
    // Trapezoid weights: half-gaps at the boundary, averaged gaps inside.
    weights_[0] = 0.5 * (points_[1] - points_[0]);
    weights_[n - 1] = 0.5 * (points_[n - 1] - points_[n - 2]);
    for (Eigen::Index j = 1; j + 1 < n; ++j) {
        weights_[j] = 0.5 * (points_[j + 1] - points_[j - 1]);
    }
}

Grid Grid::uniform(double lo, double hi, std::size_t n) {
    if (n < 2) {
        throw ConfigError("uniform grid needs at least 2 points");
    }
    if (!(hi > lo)) {
        throw ConfigError("uniform grid needs hi > lo");
    }
    std::vector<double> pts(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        pts[j] = lo + step * static_cast<double>(j);
    }
    pts.back() = hi;
    return Grid(std::move(pts));
}

double Grid::integrate(const Eigen::Ref<const Eigen::VectorXd>& values) const {
    if (values.size() != points_.size()) {
        throw ConfigError("integrate: curve has " + std::to_string(values.size()) +
                          " values but grid has " + std::to_string(points_.size()) + " points");
    }
    return weights_.dot(values);
}

double Grid::inner(const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b) const {
    if (a.size() != points_.size() || b.size() != points_.size()) {
        throw ConfigError("inner: curve length does not match grid size");
    }
    return (a.array() * b.array() * weights_.array()).sum();
}

bool Grid::operator==(const Grid& other) const {
    return points_.size() == other.points_.size() && points_ == other.points_;
}

}  // namespace hdfts
