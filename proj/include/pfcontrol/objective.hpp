#pragma once

#include "pfcontrol/control.hpp"
#include "pfcontrol/grid.hpp"
#include "pfcontrol/model.hpp"

namespace pfc {

struct CostReport {
    double J = 0.0;
    double mismatch = 0.0;        // 1/2 int |ytilde(T) - target|^2
    double regularization = 0.0;  // alpha/2 int int |u|^2
    double error_norm = 0.0;      // unweighted Euclidean norm of ytilde(T) - target
    PhysicalityReport physicality;
};

/// Sum over time levels and boundary points of f*s with weight dt*measure
/// (dt*dx1 on bottom/top, dt*dx2 on left/right, dt in 1D). Corners are not
/// boundary points, so they never contribute.
double boundary_quadrature(const BoundaryControl& f, const BoundaryControl& s, const Grid& grid);

/// Quadrature weight of boundary point b at any level.
double boundary_weight(const Grid& grid, std::size_t b);

double error_norm(const Field& ytilde, const Field& target);

/// Cost of a final phase field under control u. The physicality part of the
/// report is left default; callers copy it from the forward solve.
CostReport cost(const Field& final_ytilde, const Field& target, const BoundaryControl& u, const ModelParams& params,
                const Grid& grid);

/// Discrete gradient: component (k, b) = (alpha*u - p3) * weight(b).
BoundaryControl gradient(const FluxTrace& flux, const BoundaryControl& u, const ModelParams& params,
                         const Grid& grid);

}  // namespace pfc
