#include "pfcontrol/adjoint.hpp"

#include "pfcontrol/errors.hpp"

namespace pfc {

namespace {

class AdjointKernel {
public:
    AdjointKernel(const Grid& grid, const ModelParams& params)
        : grid_(grid),
          params_(params),
          lap_(grid),
          dt_(grid.dt()),
          a_(grid.dt() / (params.gamma * params.xi * params.xi)),
          xi2_(params.xi * params.xi),
          h_over_gxi2_(params.H / (params.gamma * params.xi * params.xi)) {}

    void advance(const double* p, const double* q, const double* zt, const double* z, double* p_next,
                 double* q_next) const {
        if (params_.reaction == ReactionKind::linear) {
            const double coupling = params_.beta * params_.xi;
            run([coupling](double, double) { return coupling; },
                [this](double zt_v, double z_v) { return reaction_dphase(z_v, zt_v, params_); }, p, q, zt, z, p_next,
                q_next);
        } else {
            run([this](double zt_v, double z_v) { return adjoint_coupling(zt_v, z_v, params_); },
                [this](double zt_v, double z_v) { return reaction_dphase(z_v, zt_v, params_); }, p, q, zt, z, p_next,
                q_next);
        }
    }

private:
    template <class Coupling, class DPhase>
    void run(Coupling coupling, DPhase dphase, const double* p, const double* q, const double* zt, const double* z,
             double* p_next, double* q_next) const {
        for_each_interior(grid_, [&](std::size_t idx) {
            const double pn = p[idx] + dt_ * (lap_(p, idx) - coupling(zt[idx], z[idx]) * q[idx]);
            p_next[idx] = pn;
            q_next[idx] = q[idx] + a_ * (xi2_ * lap_(q, idx) + dphase(zt[idx], z[idx]) * q[idx]) +
                          h_over_gxi2_ * (pn - p[idx]);
        });
    }

    const Grid& grid_;
    ModelParams params_;
    Stencil lap_;
    double dt_;
    double a_;
    double xi2_;
    double h_over_gxi2_;
};

void zero_boundary(std::span<double> f, const Grid& grid) {
    for (const auto& b : grid.boundary()) f[b.node] = 0.0;
    for (const auto& c : grid.corners()) f[c.node] = 0.0;
}

void check_finite(const Field& p, const Field& q, std::size_t level) {
    if (first_non_finite(p.values()) != p.size() || first_non_finite(q.values()) != q.size())
        throw BlowUp("adjoint solver", level);
}

}  // namespace

AdjointState adjoint_step(const AdjointState& state, std::span<const double> ztilde, std::span<const double> z,
                          const ModelParams& params, const Grid& grid) {
    if (!state.p.matches(grid) || !state.q.matches(grid) || ztilde.size() != grid.size() || z.size() != grid.size())
        throw ShapeMismatch("adjoint step inputs do not match the grid");
    AdjointState next{Field(grid), Field(grid), state.level + 1};
    AdjointKernel(grid, params)
        .advance(state.p.data(), state.q.data(), ztilde.data(), z.data(), next.p.data(), next.q.data());
    check_finite(next.p, next.q, next.level);
    return next;
}

std::vector<double> flux_from_p(std::span<const double> p, const Grid& grid) {
    if (p.size() != grid.size()) throw ShapeMismatch("adjoint frame does not match the grid");
    std::vector<double> out;
    out.reserve(grid.boundary_size());
    for (const auto& b : grid.boundary()) out.push_back(p[b.inward] / b.normal_spacing);
    return out;
}

AdjointResult solve_adjoint(const Trajectory& trajectory, const Field& target, const ModelParams& params,
                            const Grid& grid, bool with_diagnostics) {
    const std::size_t levels = grid.time_levels();
    if (trajectory.levels() != levels || trajectory.frame_size() != grid.size())
        throw ShapeMismatch("trajectory does not match the grid");
    if (!target.matches(grid)) throw ShapeMismatch("target does not match the grid");
    if (trajectory.mode() == StorageMode::final_only && levels > 2)
        throw std::invalid_argument("the adjoint sweep needs the whole forward trajectory");

    AdjointResult result;
    result.flux = FluxTrace(grid, 0.0);

    const double inv_gxi2 = 1.0 / (params.gamma * params.xi * params.xi);
    Field p(grid, 0.0);
    Field q(grid, 0.0);
    {
        const auto final_phase = trajectory.ytilde(levels - 1);
        for_each_interior(grid, [&](std::size_t idx) { q[idx] = (target[idx] - final_phase[idx]) * inv_gxi2; });
    }
    Field p_next(grid, 0.0);
    Field q_next(grid, 0.0);
    const AdjointKernel kernel(grid, params);

    std::optional<AdjointDiagnostics> diag;
    if (with_diagnostics) {
        diag.emplace();
        diag->q3 = FluxTrace(grid, 0.0);
    }
    const auto record = [&](std::size_t original_level) {
        const auto flux = flux_from_p(p.values(), grid);
        std::copy(flux.begin(), flux.end(), result.flux.level(original_level).begin());
        if (diag) {
            diag->p_frames.push_back(p);
            diag->q_frames.push_back(q);
            const auto qflux = flux_from_p(q.values(), grid);
            auto out = diag->q3.level(original_level);
            for (std::size_t b = 0; b < qflux.size(); ++b) out[b] = params.xi * params.xi * qflux[b];
        }
    };

    // Transformed level j pairs with original level N_t - 2 - j.
    record(levels - 2);
    for (std::size_t j = 0; j + 2 < levels; ++j) {
        const std::size_t k = levels - 2 - j;
        const auto z = trajectory.y(k);
        const auto zt = trajectory.ytilde(k);
        kernel.advance(p.data(), q.data(), zt.data(), z.data(), p_next.data(), q_next.data());
        zero_boundary(p_next.values(), grid);
        zero_boundary(q_next.values(), grid);
        std::swap(p, p_next);
        std::swap(q, q_next);
        check_finite(p, q, j + 1);
        record(k - 1);
    }

    if (diag) {
        diag->p2 = p;
        diag->q2 = Field(grid, 0.0);
        for_each_interior(grid, [&](std::size_t idx) {
            diag->q2[idx] = params.gamma * params.xi * params.xi * q[idx] - params.H * p[idx];
        });
        result.diagnostics = std::move(diag);
    }
    return result;
}

}  // namespace pfc
