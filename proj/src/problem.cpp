#include "pfcontrol/problem.hpp"

#include <algorithm>
#include <cmath>

#include "pfcontrol/errors.hpp"

namespace pfc {

void OptimizeConfig::validate() const {
    if (schedule.empty()) throw InvalidSpec("opt.schedule", "at least one stage is required");
    for (const auto& stage : schedule)
        if (!(stage.step > 0.0) || !std::isfinite(stage.step))
            throw InvalidSpec("opt.schedule", "every step size must be positive");
    if (!(step_scale > 0.0) || !std::isfinite(step_scale))
        throw InvalidSpec("opt.step_scale", "must be positive");
    if (!(grad_norm_stop >= 0.0)) throw InvalidSpec("opt.grad_stop", "must be non-negative");
    if (history_every == 0) throw InvalidSpec("opt.history_every", "must be at least 1");
}

std::size_t OptimizeConfig::total_iterations() const {
    std::size_t total = 0;
    for (const auto& stage : schedule) total += stage.iterations;
    return std::min(total, max_iterations);
}

double OptimizeConfig::step_at(std::size_t iter) const {
    std::size_t begin = 0;
    for (const auto& stage : schedule) {
        if (iter < begin + stage.iterations) return stage.step * step_scale;
        begin += stage.iterations;
    }
    return schedule.back().step * step_scale;
}

void OptimizeConfig::set_iterations(std::size_t n) {
    const double first = schedule.empty() ? 1.0 : schedule.front().step;
    std::vector<StepStage> out;
    std::size_t left = n;
    for (const auto& s : schedule) {
        if (left == 0) break;
        out.push_back({std::min(s.iterations, left), s.step});
        left -= out.back().iterations;
    }
    if (out.empty()) out.push_back({0, first});
    out.back().iterations += left;
    schedule = std::move(out);
}

void ScenarioSpec::validate(const Grid& grid) const {
    params.validate();
    optimize.validate();
    if (!y_ini.matches(grid)) throw InvalidSpec("scenario.y_ini", "shape does not match the grid");
    if (!ytilde_ini.matches(grid)) throw InvalidSpec("scenario.ytilde_ini", "shape does not match the grid");
    if (!target.matches(grid)) throw InvalidSpec("scenario.target", "shape does not match the grid");
    if (ytilde_bc.size() != grid.boundary_size())
        throw InvalidSpec("scenario.ytilde_bc", "one value per boundary point is required");
    if (!u0.matches(grid)) throw InvalidSpec("scenario.u0", "shape does not match the grid");
    // Targets taken from a forward solve may overshoot [0, 1] slightly (the linear
    // kind shifts the pure-phase roots), so only finiteness is required here.
    if (first_non_finite(y_ini.values()) != y_ini.size()) throw InvalidSpec("scenario.y_ini", "must be finite");
    if (first_non_finite(ytilde_ini.values()) != ytilde_ini.size())
        throw InvalidSpec("scenario.ytilde_ini", "must be finite");
    if (first_non_finite(target.values()) != target.size()) throw InvalidSpec("scenario.target", "must be finite");
    if (first_non_finite(u0.values()) != u0.size()) throw InvalidSpec("scenario.u0", "must be finite");
}

}  // namespace pfc
