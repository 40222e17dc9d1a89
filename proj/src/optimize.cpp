#include "pfcontrol/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "pfcontrol/adjoint.hpp"

namespace pfc {

CostReport reduced_cost(const ScenarioSpec& scenario, const BoundaryControl& u, const ModelParams& params,
                        const Grid& grid) {
    auto fwd = solve_forward(scenario, u, params, grid, StoragePolicy{StorageMode::final_only});
    CostReport r = cost(fwd.final.ytilde, scenario.target, u, params, grid);
    r.physicality = fwd.physicality;
    return r;
}

Evaluation evaluate(const ScenarioSpec& scenario, const BoundaryControl& u, const ModelParams& params,
                    const Grid& grid, const StoragePolicy& storage) {
    auto fwd = solve_forward(scenario, u, params, grid, storage);
    Evaluation ev;
    ev.report = cost(fwd.final.ytilde, scenario.target, u, params, grid);
    ev.report.physicality = fwd.physicality;
    const auto adj = solve_adjoint(fwd.trajectory, scenario.target, params, grid);
    ev.gradient = gradient(adj.flux, u, params, grid);
    return ev;
}

DescentResult descend(const ScenarioSpec& scenario, const ModelParams& params, const Grid& grid,
                      const OptimizeConfig& config, const StoragePolicy& storage, const ProgressCallback& progress) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const std::size_t total = config.total_iterations();

    DescentResult result;
    result.u_opt = scenario.u0;
    for (std::size_t iter = 0;; ++iter) {
        Evaluation ev;
        try {
            ev = evaluate(scenario, result.u_opt, params, grid, storage);
        } catch (const BlowUp& e) {
            result.failure = e;
            return result;
        }
        IterationRecord rec;
        rec.iter = iter;
        rec.J = ev.report.J;
        rec.mismatch = ev.report.mismatch;
        rec.regularization = ev.report.regularization;
        rec.error_norm = ev.report.error_norm;
        rec.grad_norm = norm(ev.gradient);
        rec.phys_excess = ev.report.physicality.excess;
        rec.realistic = ev.report.physicality.realistic;
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        result.realistic_throughout = result.realistic_throughout && rec.realistic;
        result.max_phys_excess = std::max(result.max_phys_excess, rec.phys_excess);
        result.final_report = ev.report;

        const bool last = iter == total;
        const bool grad_stop = config.grad_norm_stop > 0.0 && rec.grad_norm < config.grad_norm_stop;
        if (last || grad_stop || iter % config.history_every == 0) {
            result.history.records.push_back(rec);
            if (progress) progress(rec);
        }
        if (grad_stop) result.stopped_on_gradient = true;
        if (last || grad_stop) break;

        axpy(result.u_opt, -config.step_at(iter), ev.gradient);
        result.iterations = iter + 1;
    }
    return result;
}

double GradientCheckReport::max_rel_error() const {
    double worst = 0.0;
    for (const auto& d : directions) worst = std::max(worst, d.rel_error);
    return worst;
}

GradientCheckReport fd_gradient_check(const ScenarioSpec& scenario, const ModelParams& params, const Grid& grid,
                                      const BoundaryControl& u, const std::vector<BoundaryControl>& directions,
                                      double h, double tolerance) {
    if (!(h > 0.0)) throw std::invalid_argument("finite-difference step h must be positive");
    for (const auto& s : directions) {
        if (!s.matches(grid)) throw std::invalid_argument("direction does not match the grid");
        if (norm(s) == 0.0) throw std::invalid_argument("direction must be nonzero");
    }

    const Evaluation ev = evaluate(scenario, u, params, grid);
    GradientCheckReport report;
    report.h = h;
    const auto central = [&](const BoundaryControl& s, double step) {
        BoundaryControl plus = u;
        BoundaryControl minus = u;
        axpy(plus, step, s);
        axpy(minus, -step, s);
        return (reduced_cost(scenario, plus, params, grid).J - reduced_cost(scenario, minus, params, grid).J) /
               (2.0 * step);
    };
    for (const auto& s : directions) {
        DirectionCheck d;
        d.adjoint = dot(ev.gradient, s);
        d.finite_diff = central(s, h);
        d.finite_diff_half = central(s, 0.5 * h);
        const double scale = std::max({std::abs(d.adjoint), std::abs(d.finite_diff), 1e-300});
        d.rel_error = std::abs(d.adjoint - d.finite_diff) / scale;
        const double truncation = 4.0 / 3.0 * std::abs(d.finite_diff - d.finite_diff_half);
        d.truncation_dominated = truncation > tolerance * scale;
        report.directions.push_back(d);
    }
    return report;
}

}  // namespace pfc
