#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "pfcontrol/control.hpp"
#include "pfcontrol/errors.hpp"
#include "pfcontrol/forward.hpp"
#include "pfcontrol/objective.hpp"
#include "pfcontrol/problem.hpp"

namespace pfc {

struct IterationRecord {
    std::size_t iter = 0;
    double J = 0.0;
    double mismatch = 0.0;
    double regularization = 0.0;
    double error_norm = 0.0;
    double grad_norm = 0.0;
    double phys_excess = 0.0;
    bool realistic = true;
    double wall_ms = 0.0;  // since the start of the descent
};

struct DescentHistory {
    std::vector<IterationRecord> records;
};

struct DescentResult {
    BoundaryControl u_opt;
    DescentHistory history;
    CostReport final_report;   // at u_opt
    std::size_t iterations = 0;  // gradient steps taken
    bool stopped_on_gradient = false;
    bool realistic_throughout = true;  // every evaluated iterate was realistic
    double max_phys_excess = -std::numeric_limits<double>::infinity();  // over every evaluated iterate
    std::optional<BlowUp> failure;     // set when a solve blew up; history is kept
};

/// Evaluation of the reduced cost and its adjoint gradient at one control.
struct Evaluation {
    CostReport report;
    BoundaryControl gradient;
};

/// Reduced cost J(u): forward solve (final frame only) plus cost.
CostReport reduced_cost(const ScenarioSpec& scenario, const BoundaryControl& u, const ModelParams& params,
                        const Grid& grid);

/// Forward solve, adjoint sweep and gradient assembly at u.
Evaluation evaluate(const ScenarioSpec& scenario, const BoundaryControl& u, const ModelParams& params,
                    const Grid& grid, const StoragePolicy& storage = {});

using ProgressCallback = std::function<void(const IterationRecord&)>;

/// Fixed-step gradient descent u <- u - eps * grad following config.schedule.
DescentResult descend(const ScenarioSpec& scenario, const ModelParams& params, const Grid& grid,
                      const OptimizeConfig& config, const StoragePolicy& storage = {},
                      const ProgressCallback& progress = {});

struct DirectionCheck {
    double adjoint = 0.0;       // sum of gradient * direction
    double finite_diff = 0.0;   // (J(u+hs) - J(u-hs)) / 2h
    double finite_diff_half = 0.0;  // same with h/2
    double rel_error = 0.0;
    bool truncation_dominated = false;  // h and h/2 disagree more than the adjoint comparison tolerates
};

struct GradientCheckReport {
    double h = 0.0;
    std::vector<DirectionCheck> directions;
    double max_rel_error() const;
};

/// Compares the adjoint directional derivative with central differences of J.
/// Throws std::invalid_argument for h <= 0 or an all-zero direction.
GradientCheckReport fd_gradient_check(const ScenarioSpec& scenario, const ModelParams& params, const Grid& grid,
                                      const BoundaryControl& u, const std::vector<BoundaryControl>& directions,
                                      double h, double tolerance = 1e-3);

}  // namespace pfc
