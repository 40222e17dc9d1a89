#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace pfc {

struct ModelParams;

/// Uniform vertex-centred space-time mesh over (0,L1)[x(0,L2)] x [0,T].
struct GridSpec {
    int dim = 1;
    std::array<double, 2> lengths{1.0, 1.0};
    std::array<std::size_t, 2> counts{3, 1};  // counts[1] is ignored when dim == 1
    std::size_t time_levels = 2;
    double final_time = 1.0;

    /// Throws InvalidSpec naming the first offending field.
    void validate() const;
};

enum class Edge { left, right, bottom, top };

std::string_view to_string(Edge edge);

/// One control point on the spatial boundary. Corners never appear in 2D.
struct BoundaryPoint {
    Edge edge;
    std::size_t along;     // i on bottom/top, j on left/right, 0 in 1D
    std::size_t node;      // flat index of the boundary node
    std::size_t inward;    // flat index of the interior neighbour along the inward normal
    double normal_spacing; // spacing between node and inward
    double measure;        // edge length carried by the point (1 in 1D)
};

/// A 2D corner node and the two edge nodes it is averaged from.
struct Corner {
    std::size_t node;
    std::size_t edge_a;
    std::size_t edge_b;
};

class Grid {
public:
    explicit Grid(const GridSpec& spec);

    const GridSpec& spec() const noexcept { return spec_; }
    int dim() const noexcept { return spec_.dim; }
    std::size_t n1() const noexcept { return n1_; }
    std::size_t n2() const noexcept { return n2_; }
    std::size_t size() const noexcept { return n1_ * n2_; }
    std::size_t time_levels() const noexcept { return spec_.time_levels; }
    double final_time() const noexcept { return spec_.final_time; }
    double dt() const noexcept { return dt_; }
    double dx1() const noexcept { return dx1_; }
    double dx2() const noexcept { return dx2_; }

    std::size_t index(std::size_t i, std::size_t j = 0) const noexcept { return i * n2_ + j; }
    double x1(std::size_t i) const noexcept { return static_cast<double>(i) * dx1_; }
    double x2(std::size_t j) const noexcept { return dim() == 2 ? static_cast<double>(j) * dx2_ : 0.0; }
    double time(std::size_t k) const noexcept { return static_cast<double>(k) * dt_; }

    bool is_boundary(std::size_t i, std::size_t j = 0) const noexcept;

    /// Quadrature volume of the cell around (i, j): half cells on edges, quarter cells at corners.
    double cell_volume(std::size_t i, std::size_t j = 0) const noexcept;

    /// Boundary points in the frozen order bottom, top, left, right (1D: left, right).
    std::span<const BoundaryPoint> boundary() const noexcept { return boundary_; }
    std::size_t boundary_size() const noexcept { return boundary_.size(); }
    std::span<const Corner> corners() const noexcept { return corners_; }

    /// Flat indices of all interior nodes, row-major.
    std::span<const std::size_t> interior() const noexcept { return interior_; }

private:
    GridSpec spec_;
    std::size_t n1_;
    std::size_t n2_;
    double dt_;
    double dx1_;
    double dx2_;
    std::vector<BoundaryPoint> boundary_;
    std::vector<Corner> corners_;
    std::vector<std::size_t> interior_;
};

Grid make_grid(const GridSpec& spec);

/// Scalar mesh function on every node of a grid, row-major over (x1, x2).
class Field {
public:
    Field() = default;
    explicit Field(const Grid& grid, double value = 0.0)
        : n1_(grid.n1()), n2_(grid.n2()), values_(grid.size(), value) {}

    std::size_t n1() const noexcept { return n1_; }
    std::size_t n2() const noexcept { return n2_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator[](std::size_t idx) noexcept { return values_[idx]; }
    double operator[](std::size_t idx) const noexcept { return values_[idx]; }
    double& at(std::size_t i, std::size_t j = 0) noexcept { return values_[i * n2_ + j]; }
    double at(std::size_t i, std::size_t j = 0) const noexcept { return values_[i * n2_ + j]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }

    bool matches(const Grid& grid) const noexcept {
        return n1_ == grid.n1() && n2_ == grid.n2() && values_.size() == grid.size();
    }

    bool operator==(const Field&) const = default;

private:
    std::size_t n1_ = 0;
    std::size_t n2_ = 1;
    std::vector<double> values_;
};

/// Index of the first non-finite value, or size() when all are finite.
std::size_t first_non_finite(std::span<const double> values) noexcept;

/// Central second-difference quotient; neighbour pairs are summed first so
/// that mirrored inputs give bit-mirrored results.
class Stencil {
public:
    explicit Stencil(const Grid& grid) noexcept
        : two_d_(grid.dim() == 2),
          stride_(grid.n2()),
          c1_(1.0 / (grid.dx1() * grid.dx1())),
          c2_(grid.dim() == 2 ? 1.0 / (grid.dx2() * grid.dx2()) : 0.0) {}

    double operator()(const double* f, std::size_t idx) const noexcept {
        const double centre = 2.0 * f[idx];
        double lap = (f[idx - stride_] + f[idx + stride_] - centre) * c1_;
        if (two_d_) lap += (f[idx - 1] + f[idx + 1] - centre) * c2_;
        return lap;
    }

private:
    bool two_d_;
    std::size_t stride_;
    double c1_;
    double c2_;
};

/// Calls fn(flat_index) for every interior node, row-major.
template <class Fn>
void for_each_interior(const Grid& grid, Fn&& fn) {
    const std::size_t n1 = grid.n1();
    const std::size_t n2 = grid.n2();
    if (grid.dim() == 1) {
        for (std::size_t i = 1; i + 1 < n1; ++i) fn(i);
        return;
    }
    for (std::size_t i = 1; i + 1 < n1; ++i) {
        const std::size_t row = i * n2;
        for (std::size_t j = 1; j + 1 < n2; ++j) fn(row + j);
    }
}

/// Discrete Laplacian at interior nodes; boundary entries of the result are zero
/// and carry no meaning.
Field laplacian(const Field& f, const Grid& grid);

/// Largest explicit-Euler step admissible for both the heat and the phase equation.
double stability_bound(const Grid& grid, const ModelParams& params);

}  // namespace pfc
