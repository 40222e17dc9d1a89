#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pfcontrol/control.hpp"
#include "pfcontrol/grid.hpp"
#include "pfcontrol/model.hpp"
#include "pfcontrol/trajectory.hpp"

namespace pfc {

/// Adjoint temperature p and adjoint phase q in transformed time t -> T - t.
/// Both vanish on the spatial boundary at every level.
struct AdjointState {
    Field p;
    Field q;
    std::size_t level = 0;
};

/// One explicit Euler step of the transformed adjoint system, p before q so
/// that H * p_t uses the just-computed increment.
///
/// `ztilde` and `z` are the forward phase and temperature frames whose
/// linearisation this step transposes: stepping transformed level j -> j+1
/// uses original level N_t - 2 - j, the frame the forward step into level
/// N_t - 1 - j started from.
AdjointState adjoint_step(const AdjointState& state, std::span<const double> ztilde, std::span<const double> z,
                          const ModelParams& params, const Grid& grid);

/// p3 = -grad(p) . n on every boundary point, one-sided with p = 0 on the boundary.
std::vector<double> flux_from_p(std::span<const double> p, const Grid& grid);

/// Optional by-products of the adjoint sweep; they do not enter the gradient.
struct AdjointDiagnostics {
    Field p2;        // p1 at t = 0
    Field q2;        // (gamma xi^2 q1 - H p1) at t = 0
    FluxTrace q3;    // -xi^2 grad(q1) . n on the boundary
    std::vector<Field> p_frames;  // transformed-time levels 0 .. N_t - 2
    std::vector<Field> q_frames;
};

struct AdjointResult {
    FluxTrace flux;  // p3 in original time; levels N_t - 2 and N_t - 1 are zero
    std::optional<AdjointDiagnostics> diagnostics;
};

/// Runs the adjoint sweep from q(0) = (target - ytilde(T)) / (gamma xi^2)
/// over the reversed forward trajectory. Flux level k (original time) comes
/// from transformed level N_t - 2 - k.
AdjointResult solve_adjoint(const Trajectory& trajectory, const Field& target, const ModelParams& params,
                            const Grid& grid, bool with_diagnostics = false);

}  // namespace pfc
