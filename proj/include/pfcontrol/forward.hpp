#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pfcontrol/control.hpp"
#include "pfcontrol/grid.hpp"
#include "pfcontrol/model.hpp"
#include "pfcontrol/problem.hpp"
#include "pfcontrol/trajectory.hpp"

namespace pfc {

/// Temperature and phase field at one time level.
struct State {
    Field y;
    Field ytilde;
    std::size_t level = 0;
};

/// Overwrites the boundary nodes of `f` with `boundary_values` (one per
/// boundary point, grid order). 2D corners get the mean of their two edge
/// neighbours; no stencil ever reads them.
void apply_dirichlet(std::span<double> f, std::span<const double> boundary_values, const Grid& grid);
Field apply_dirichlet(Field f, std::span<const double> boundary_values, const Grid& grid);

/// One explicit Euler step of the state system: the phase field first, then
/// the temperature using the just-computed discrete phase increment.
/// The returned state keeps the boundary values u_k / ybc; the caller imposes
/// u_{k+1} before the next step.
State step(const State& state, std::span<const double> u_k, std::span<const double> ybc, const ModelParams& params,
           const Grid& grid);

struct ForwardResult {
    Trajectory trajectory;
    State final;
    PhysicalityReport physicality;
    std::vector<std::string> warnings;
};

/// Called with every frame (level, y, ytilde) as the solve produces it.
using FrameObserver = std::function<void(std::size_t k, std::span<const double> y, std::span<const double> yt)>;

/// Solves the state system under control `u`; frame k carries u at level k.
ForwardResult solve_forward(const ScenarioSpec& scenario, const BoundaryControl& u, const ModelParams& params,
                            const Grid& grid, const StoragePolicy& storage = {}, const FrameObserver& observer = {});

}  // namespace pfc
