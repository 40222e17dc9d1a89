#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pfcontrol/grid.hpp"

namespace pfc {

/// A mesh function on (time levels) x (boundary points), level-major.
/// Holds controls, flux traces and gradients alike.
class BoundaryControl {
public:
    BoundaryControl() = default;
    explicit BoundaryControl(const Grid& grid, double value = 0.0)
        : levels_(grid.time_levels()), points_(grid.boundary_size()), values_(levels_ * points_, value) {}
    BoundaryControl(std::size_t levels, std::size_t points, double value = 0.0)
        : levels_(levels), points_(points), values_(levels * points, value) {}

    std::size_t levels() const noexcept { return levels_; }
    std::size_t points() const noexcept { return points_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& at(std::size_t k, std::size_t b) noexcept { return values_[k * points_ + b]; }
    double at(std::size_t k, std::size_t b) const noexcept { return values_[k * points_ + b]; }

    std::span<double> level(std::size_t k) noexcept { return {values_.data() + k * points_, points_}; }
    std::span<const double> level(std::size_t k) const noexcept {
        return {values_.data() + k * points_, points_};
    }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    bool matches(const Grid& grid) const noexcept {
        return levels_ == grid.time_levels() && points_ == grid.boundary_size();
    }
    bool same_shape(const BoundaryControl& other) const noexcept {
        return levels_ == other.levels_ && points_ == other.points_;
    }

    bool operator==(const BoundaryControl&) const = default;

private:
    std::size_t levels_ = 0;
    std::size_t points_ = 0;
    std::vector<double> values_;
};

using FluxTrace = BoundaryControl;

/// Componentwise sum of products.
double dot(const BoundaryControl& a, const BoundaryControl& b);

/// Euclidean norm of the value vector.
double norm(const BoundaryControl& a);

/// a += scale * b
void axpy(BoundaryControl& a, double scale, const BoundaryControl& b);

}  // namespace pfc
