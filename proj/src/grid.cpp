#include "pfcontrol/grid.hpp"

#include <algorithm>
#include <cmath>

#include "pfcontrol/errors.hpp"
#include "pfcontrol/model.hpp"

namespace pfc {

void GridSpec::validate() const {
    if (dim != 1 && dim != 2) throw InvalidSpec("grid.dim", "must be 1 or 2");
    for (int a = 0; a < dim; ++a) {
        const std::string axis = std::to_string(a + 1);
        if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a]))
            throw InvalidSpec("grid.L" + axis, "length must be positive and finite");
        if (counts[a] < 3) throw InvalidSpec("grid.N" + axis, "at least 3 mesh points are required");
    }
    if (time_levels < 2) throw InvalidSpec("grid.Nt", "at least 2 time levels are required");
    if (!(final_time > 0.0) || !std::isfinite(final_time))
        throw InvalidSpec("grid.T", "final time must be positive and finite");
}

std::string_view to_string(Edge edge) {
    switch (edge) {
        case Edge::left: return "left";
        case Edge::right: return "right";
        case Edge::bottom: return "bottom";
        case Edge::top: return "top";
    }
    return "?";
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
    spec_.validate();
    if (spec_.dim == 1) {
        spec_.counts[1] = 1;
        spec_.lengths[1] = 0.0;
    }
    n1_ = spec_.counts[0];
    n2_ = spec_.dim == 2 ? spec_.counts[1] : 1;
    dt_ = spec_.final_time / static_cast<double>(spec_.time_levels - 1);
    dx1_ = spec_.lengths[0] / static_cast<double>(n1_ - 1);
    dx2_ = spec_.dim == 2 ? spec_.lengths[1] / static_cast<double>(n2_ - 1) : 0.0;

    if (spec_.dim == 1) {
        boundary_.push_back({Edge::left, 0, index(0), index(1), dx1_, 1.0});
        boundary_.push_back({Edge::right, 0, index(n1_ - 1), index(n1_ - 2), dx1_, 1.0});
        for (std::size_t i = 1; i + 1 < n1_; ++i) interior_.push_back(index(i));
        return;
    }

    boundary_.reserve(2 * (n1_ - 2) + 2 * (n2_ - 2));
    for (std::size_t i = 1; i + 1 < n1_; ++i)
        boundary_.push_back({Edge::bottom, i, index(i, 0), index(i, 1), dx2_, dx1_});
    for (std::size_t i = 1; i + 1 < n1_; ++i)
        boundary_.push_back({Edge::top, i, index(i, n2_ - 1), index(i, n2_ - 2), dx2_, dx1_});
    for (std::size_t j = 1; j + 1 < n2_; ++j)
        boundary_.push_back({Edge::left, j, index(0, j), index(1, j), dx1_, dx2_});
    for (std::size_t j = 1; j + 1 < n2_; ++j)
        boundary_.push_back({Edge::right, j, index(n1_ - 1, j), index(n1_ - 2, j), dx1_, dx2_});

    corners_ = {
        {index(0, 0), index(1, 0), index(0, 1)},
        {index(n1_ - 1, 0), index(n1_ - 2, 0), index(n1_ - 1, 1)},
        {index(0, n2_ - 1), index(1, n2_ - 1), index(0, n2_ - 2)},
        {index(n1_ - 1, n2_ - 1), index(n1_ - 2, n2_ - 1), index(n1_ - 1, n2_ - 2)},
    };

    interior_.reserve((n1_ - 2) * (n2_ - 2));
    for (std::size_t i = 1; i + 1 < n1_; ++i)
        for (std::size_t j = 1; j + 1 < n2_; ++j) interior_.push_back(index(i, j));
}

bool Grid::is_boundary(std::size_t i, std::size_t j) const noexcept {
    if (i == 0 || i + 1 == n1_) return true;
    return dim() == 2 && (j == 0 || j + 1 == n2_);
}

double Grid::cell_volume(std::size_t i, std::size_t j) const noexcept {
    double vol = (i == 0 || i + 1 == n1_) ? 0.5 * dx1_ : dx1_;
    if (dim() == 2) vol *= (j == 0 || j + 1 == n2_) ? 0.5 * dx2_ : dx2_;
    return vol;
}

Grid make_grid(const GridSpec& spec) { return Grid(spec); }

std::size_t first_non_finite(std::span<const double> values) noexcept {
    const auto it = std::find_if(values.begin(), values.end(), [](double v) { return !std::isfinite(v); });
    return static_cast<std::size_t>(it - values.begin());
}

Field laplacian(const Field& f, const Grid& grid) {
    Field out(grid, 0.0);
    const Stencil lap(grid);
    for (const std::size_t idx : grid.interior()) out[idx] = lap(f.data(), idx);
    return out;
}

double stability_bound(const Grid& grid, const ModelParams& params) {
    double h = grid.dx1();
    if (grid.dim() == 2) h = std::min(h, grid.dx2());
    const double diffusion = std::max(1.0, 1.0 / params.gamma);
    return h * h / (2.0 * grid.dim() * diffusion);
}

}  // namespace pfc
