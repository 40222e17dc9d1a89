#include "pfcontrol/objective.hpp"

#include <cmath>

#include "pfcontrol/errors.hpp"

namespace pfc {

double boundary_weight(const Grid& grid, std::size_t b) { return grid.dt() * grid.boundary()[b].measure; }

double boundary_quadrature(const BoundaryControl& f, const BoundaryControl& s, const Grid& grid) {
    if (!f.matches(grid) || !s.matches(grid)) throw ShapeMismatch("boundary functions do not match the grid");
    double total = 0.0;
    for (std::size_t k = 0; k < f.levels(); ++k) {
        const auto fk = f.level(k);
        const auto sk = s.level(k);
        for (std::size_t b = 0; b < fk.size(); ++b) total += fk[b] * sk[b] * boundary_weight(grid, b);
    }
    return total;
}

double error_norm(const Field& ytilde, const Field& target) {
    if (ytilde.size() != target.size()) throw ShapeMismatch("phase field and target differ in size");
    double sum = 0.0;
    for (std::size_t n = 0; n < ytilde.size(); ++n) {
        const double d = ytilde[n] - target[n];
        sum += d * d;
    }
    return std::sqrt(sum);
}

CostReport cost(const Field& final_ytilde, const Field& target, const BoundaryControl& u, const ModelParams& params,
                const Grid& grid) {
    if (!final_ytilde.matches(grid) || !target.matches(grid)) throw ShapeMismatch("fields do not match the grid");
    CostReport r;
    double mismatch = 0.0;
    for (std::size_t i = 0; i < grid.n1(); ++i)
        for (std::size_t j = 0; j < grid.n2(); ++j) {
            const double d = final_ytilde.at(i, j) - target.at(i, j);
            mismatch += d * d * grid.cell_volume(i, j);
        }
    r.mismatch = 0.5 * mismatch;
    r.regularization = params.alpha > 0.0 ? 0.5 * params.alpha * boundary_quadrature(u, u, grid) : 0.0;
    r.J = r.mismatch + r.regularization;
    r.error_norm = error_norm(final_ytilde, target);
    return r;
}

BoundaryControl gradient(const FluxTrace& flux, const BoundaryControl& u, const ModelParams& params,
                         const Grid& grid) {
    if (!flux.matches(grid) || !u.matches(grid)) throw ShapeMismatch("flux or control does not match the grid");
    BoundaryControl g(grid, 0.0);
    for (std::size_t k = 0; k < g.levels(); ++k) {
        const auto fk = flux.level(k);
        const auto uk = u.level(k);
        auto gk = g.level(k);
        for (std::size_t b = 0; b < gk.size(); ++b)
            gk[b] = (params.alpha * uk[b] - fk[b]) * boundary_weight(grid, b);
    }
    return g;
}

}  // namespace pfc
