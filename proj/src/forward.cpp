#include "pfcontrol/forward.hpp"

#include <memory>
#include <sstream>

#include "pfcontrol/errors.hpp"

namespace pfc {

void apply_dirichlet(std::span<double> f, std::span<const double> boundary_values, const Grid& grid) {
    if (boundary_values.size() != grid.boundary_size())
        throw ShapeMismatch("boundary data has " + std::to_string(boundary_values.size()) + " values, grid has " +
                            std::to_string(grid.boundary_size()) + " boundary points");
    if (f.size() != grid.size()) throw ShapeMismatch("field does not match the grid");
    const auto points = grid.boundary();
    for (std::size_t b = 0; b < points.size(); ++b) f[points[b].node] = boundary_values[b];
    for (const Corner& c : grid.corners()) f[c.node] = 0.5 * (f[c.edge_a] + f[c.edge_b]);
}

Field apply_dirichlet(Field f, std::span<const double> boundary_values, const Grid& grid) {
    apply_dirichlet(f.values(), boundary_values, grid);
    return f;
}

namespace {

/// Interior update of the explicit scheme.
class ForwardKernel {
public:
    ForwardKernel(const Grid& grid, const ModelParams& params)
        : grid_(grid),
          params_(params),
          lap_(grid),
          dt_(grid.dt()),
          a_(grid.dt() / (params.gamma * params.xi * params.xi)),
          xi2_(params.xi * params.xi) {}

    void advance(const double* y, const double* yt, double* y_next, double* yt_next) const {
        if (params_.reaction == ReactionKind::linear)
            run([](double t, double p, const ModelParams& m) { return reaction_linear(t, p, m); }, y, yt, y_next,
                yt_next);
        else
            run([](double t, double p, const ModelParams& m) { return reaction_limiter(t, p, m); }, y, yt, y_next,
                yt_next);
    }

private:
    template <class Reaction>
    void run(Reaction f0, const double* y, const double* yt, double* y_next, double* yt_next) const {
        const double H = params_.H;
        for_each_interior(grid_, [&](std::size_t idx) {
            const double phase = yt[idx] + a_ * (xi2_ * lap_(yt, idx) + f0(y[idx], yt[idx], params_));
            yt_next[idx] = phase;
            y_next[idx] = y[idx] + dt_ * lap_(y, idx) + H * (phase - yt[idx]);
        });
    }

    const Grid& grid_;
    ModelParams params_;
    Stencil lap_;
    double dt_;
    double a_;
    double xi2_;
};

/// Everything a re-step needs, shared between the solve and its trajectory.
struct StepContext {
    StepContext(Grid g, ModelParams p, BoundaryControl c, std::vector<double> bc)
        : grid(std::move(g)), params(p), u(std::move(c)), ybc(std::move(bc)), kernel(grid, params) {}

    void advance(std::size_t k, std::span<const double> y, std::span<const double> yt, std::span<double> y_next,
                 std::span<double> yt_next) const {
        kernel.advance(y.data(), yt.data(), y_next.data(), yt_next.data());
        apply_dirichlet(y_next, u.level(k + 1), grid);
        apply_dirichlet(yt_next, ybc, grid);
        if (first_non_finite(y_next) != y_next.size() || first_non_finite(yt_next) != yt_next.size())
            throw BlowUp("forward solver", k + 1);
    }

    Grid grid;
    ModelParams params;
    BoundaryControl u;
    std::vector<double> ybc;
    ForwardKernel kernel;
};

}  // namespace

State step(const State& state, std::span<const double> u_k, std::span<const double> ybc, const ModelParams& params,
           const Grid& grid) {
    if (!state.y.matches(grid) || !state.ytilde.matches(grid)) throw ShapeMismatch("state does not match the grid");
    const Field y = apply_dirichlet(state.y, u_k, grid);
    const Field yt = apply_dirichlet(state.ytilde, ybc, grid);
    State next{y, yt, state.level + 1};
    ForwardKernel(grid, params).advance(y.data(), yt.data(), next.y.data(), next.ytilde.data());
    if (first_non_finite(next.y.values()) != next.y.size() ||
        first_non_finite(next.ytilde.values()) != next.ytilde.size())
        throw BlowUp("forward solver", next.level);
    return next;
}

ForwardResult solve_forward(const ScenarioSpec& scenario, const BoundaryControl& u, const ModelParams& params,
                            const Grid& grid, const StoragePolicy& storage, const FrameObserver& observer) {
    scenario.validate(grid);
    params.validate();
    if (!u.matches(grid)) throw ShapeMismatch("control does not match the grid");

    ForwardResult result;
    const double bound = stability_bound(grid, params);
    if (grid.dt() > bound) {
        std::ostringstream msg;
        msg << "time step " << grid.dt() << " exceeds the explicit stability bound " << bound;
        result.warnings.push_back(msg.str());
    }

    auto ctx = std::make_shared<const StepContext>(grid, params, u, scenario.ytilde_bc);
    const std::size_t levels = grid.time_levels();
    const std::size_t n = grid.size();
    const auto [mode, stride] = Trajectory::plan(storage, levels, n);
    result.trajectory = Trajectory(levels, n, mode, stride,
                                   [ctx](std::size_t k, std::span<const double> y, std::span<const double> yt,
                                         std::span<double> y_next, std::span<double> yt_next) {
                                       ctx->advance(k, y, yt, y_next, yt_next);
                                   });

    Field y = apply_dirichlet(scenario.y_ini, u.level(0), grid);
    Field yt = apply_dirichlet(scenario.ytilde_ini, scenario.ytilde_bc, grid);
    Field y_next = y;
    Field yt_next = yt;
    PhysicalityMonitor monitor(params);
    monitor.observe(y.data(), n, 0);
    result.trajectory.record(0, y.values(), yt.values());
    if (observer) observer(0, y.values(), yt.values());
    for (std::size_t k = 0; k + 1 < levels; ++k) {
        ctx->advance(k, y.values(), yt.values(), y_next.values(), yt_next.values());
        std::swap(y, y_next);
        std::swap(yt, yt_next);
        monitor.observe(y.data(), n, k + 1);
        result.trajectory.record(k + 1, y.values(), yt.values());
        if (observer) observer(k + 1, y.values(), yt.values());
    }
    result.final = State{std::move(y), std::move(yt), levels - 1};
    result.physicality = monitor.report();
    return result;
}

}  // namespace pfc
