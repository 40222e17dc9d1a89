#include "pfcontrol/model.hpp"

#include <cmath>

#include "pfcontrol/errors.hpp"

namespace pfc {

std::string_view to_string(ReactionKind kind) {
    return kind == ReactionKind::linear ? "linear" : "limiter";
}

void ModelParams::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!(gamma > 0.0) || !finite(gamma)) throw InvalidSpec("model.gamma", "must be positive");
    if (!(xi > 0.0) || !finite(xi)) throw InvalidSpec("model.xi", "must be positive");
    if (!(H >= 0.0) || !finite(H)) throw InvalidSpec("model.H", "must be non-negative");
    if (!(alpha >= 0.0) || !finite(alpha)) throw InvalidSpec("model.alpha", "must be non-negative");
    if (!finite(beta)) throw InvalidSpec("model.beta", "must be finite");
    if (!finite(y_mt)) throw InvalidSpec("model.y_mt", "must be finite");
    if (reaction == ReactionKind::limiter) {
        if (!(eps0 >= 0.0)) throw InvalidSpec("model.eps0", "must lie in [0, eps1)");
        if (!(eps1 <= 1.0)) throw InvalidSpec("model.eps1", "must lie in (eps0, 1]");
        if (!(eps0 < eps1)) throw InvalidSpec("model.eps0", "must be smaller than eps1");
    }
}

void PhysicalityMonitor::observe(const double* y, std::size_t n, std::size_t level) noexcept {
    const double scale = params_.beta * params_.xi;
    for (std::size_t idx = 0; idx < n; ++idx) {
        const double c = scale * (y[idx] - params_.y_mt);
        const double a = std::abs(c);
        if (!seen_ || a > acc_.max_coupling) {
            acc_.max_coupling = a;
            acc_.level = level;
            acc_.node = idx;
        }
        if (!seen_ || c > acc_.max_superheat) acc_.max_superheat = c;
        seen_ = true;
    }
}

PhysicalityReport PhysicalityMonitor::report() const noexcept {
    PhysicalityReport r = acc_;
    r.excess = r.max_coupling - kPhysicalityBound;
    r.realistic = params_.reaction == ReactionKind::linear ? r.max_coupling < kPhysicalityBound
                                                           : r.max_superheat < 1.0;
    return r;
}

}  // namespace pfc
