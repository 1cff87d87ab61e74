#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace hdfts {

// Shared evaluation grid on a closed interval. All curves in a panel are
// observed on the same strictly increasing grid; integrals are trapezoid
// sums with weights fixed at construction.
class Grid {
public:
    Grid() = default;
    explicit Grid(std::vector<double> points);

    // Uniform grid with n points covering [lo, hi].
    static Grid uniform(double lo, double hi, std::size_t n);

    std::size_t size() const noexcept { return static_cast<std::size_t>(points_.size()); }
    bool empty() const noexcept { return points_.size() == 0; }

    double point(std::size_t j) const { return points_[static_cast<Eigen::Index>(j)]; }
    double weight(std::size_t j) const { return weights_[static_cast<Eigen::Index>(j)]; }

    const Eigen::VectorXd& points() const noexcept { return points_; }
    const Eigen::VectorXd& weights() const noexcept { return weights_; }

    // Trapezoid integral of a curve sampled on this grid.
    double integrate(const Eigen::Ref<const Eigen::VectorXd>& values) const;

    // Trapezoid approximation of the L2 inner product of two curves.
    double inner(const Eigen::Ref<const Eigen::VectorXd>& a,
                 const Eigen::Ref<const Eigen::VectorXd>& b) const;

    bool operator==(const Grid& other) const;
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    Eigen::VectorXd points_;
    Eigen::VectorXd weights_;
};

}  // namespace hdfts
