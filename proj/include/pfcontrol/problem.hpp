#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "pfcontrol/control.hpp"
#include "pfcontrol/grid.hpp"
#include "pfcontrol/model.hpp"

namespace pfc {

/// One stage of a fixed-step gradient descent schedule.
struct StepStage {
    std::size_t iterations = 0;
    double step = 1.0;
};

struct OptimizeConfig {
    std::vector<StepStage> schedule{{100, 1.0}};
    /// Multiplies every scheduled step; presets keep published step sizes in
    /// `schedule` and their calibration to this gradient convention here.
    double step_scale = 1.0;
    std::size_t max_iterations = std::numeric_limits<std::size_t>::max();
    double grad_norm_stop = 0.0;  // 0 disables the gradient-norm stop
    std::size_t history_every = 1;

    void validate() const;
    /// Iterations the schedule asks for, capped by max_iterations.
    std::size_t total_iterations() const;
    /// Effective step (including step_scale) used at iteration `iter`.
    double step_at(std::size_t iter) const;
    /// Resizes the schedule to exactly n iterations: later stages are cut, the last one is extended.
    void set_iterations(std::size_t n);
};

/// Complete input data of one optimal control problem.
struct ScenarioSpec {
    std::string name;
    std::string description;
    GridSpec grid;
    ModelParams params;
    Field y_ini;
    Field ytilde_ini;
    std::vector<double> ytilde_bc;  // one value per boundary point, constant in time
    Field target;
    BoundaryControl u0;
    OptimizeConfig optimize;

    /// Checks shapes against `grid` and value ranges; throws InvalidSpec.
    void validate(const Grid& grid) const;
};

}  // namespace pfc
