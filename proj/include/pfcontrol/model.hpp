#pragma once

#include <cstddef>
#include <string_view>

namespace pfc {

enum class ReactionKind { linear, limiter };

std::string_view to_string(ReactionKind kind);

/// Dimensionless coefficients of the heat / Allen-Cahn system and the cost.
struct ModelParams {
    double gamma = 1.0;   // attachment kinetics
    double beta = 2.0;    // supercooling
    double xi = 0.005;    // interface thickness scale
    double y_mt = 0.5;    // melting temperature
    double H = 1.0;       // latent heat
    double alpha = 0.0;   // control regularisation weight
    ReactionKind reaction = ReactionKind::linear;
    double eps0 = 0.0;    // limiter thresholds, used only by the limiter kind
    double eps1 = 0.2;

    void validate() const;
};

/// Edge of the admissible band for beta*xi*(y - y_mt) under the linear reaction term.
inline constexpr double kPhysicalityBound = 0.048112522432468816;  // sqrt(3)/36

/// Cubic smoothstep between eps0 and eps1.
inline double sigma(double ytilde, double eps0, double eps1) noexcept {
    if (ytilde <= eps0) return 0.0;
    if (ytilde >= eps1) return 1.0;
    const double s = (ytilde - eps0) / (eps1 - eps0);
    return 3.0 * s * s - 2.0 * s * s * s;
}

inline double sigma_prime(double ytilde, double eps0, double eps1) noexcept {
    if (ytilde <= eps0 || ytilde >= eps1) return 0.0;
    const double w = eps1 - eps0;
    const double s = (ytilde - eps0) / w;
    return 6.0 * s * (1.0 - s) / w;
}

inline double reaction_linear(double y, double ytilde, const ModelParams& p) noexcept {
    return ytilde * (1.0 - ytilde) * (ytilde - 0.5) - p.beta * p.xi * (y - p.y_mt);
}

inline double reaction_limiter(double y, double ytilde, const ModelParams& p) noexcept {
    const double lim = sigma(ytilde, p.eps0, p.eps1);
    return 2.0 * ytilde * (1.0 - ytilde) * (ytilde - 0.5 + p.xi * p.beta * 0.5 * lim * (p.y_mt - y));
}

inline double reaction(double y, double ytilde, const ModelParams& p) noexcept {
    return p.reaction == ReactionKind::linear ? reaction_linear(y, ytilde, p)
                                              : reaction_limiter(y, ytilde, p);
}

/// Coefficient c multiplying q in the adjoint temperature equation, c = -df0/dy.
inline double adjoint_coupling(double ztilde, double z, const ModelParams& p) noexcept {
    (void)z;
    if (p.reaction == ReactionKind::linear) return p.beta * p.xi;
    const double lim = sigma(ztilde, p.eps0, p.eps1);
    return p.beta * p.xi * (ztilde * lim - ztilde * ztilde * lim);
}

/// Temperature-dependent part of the limiter term's phase derivative:
/// df0/dytilde = 2 * (cubic derivative) - xi * h_term.
inline double h_term(double ztilde, double z, const ModelParams& p) noexcept {
    const double lim = sigma(ztilde, p.eps0, p.eps1);
    const double dlim = sigma_prime(ztilde, p.eps0, p.eps1);
    return p.beta * (z - p.y_mt) *
           (lim + ztilde * dlim - 2.0 * ztilde * lim - ztilde * ztilde * dlim);
}

/// df0/dytilde, the coefficient of q in the adjoint phase equation.
inline double reaction_dphase(double y, double ytilde, const ModelParams& p) noexcept {
    const double cubic = -3.0 * ytilde * ytilde + 3.0 * ytilde - 0.5;
    if (p.reaction == ReactionKind::linear) return cubic;
    return 2.0 * cubic - p.xi * h_term(ytilde, y, p);
}

/// Post-hoc physicality diagnostics of a temperature history.
struct PhysicalityReport {
    double max_coupling = 0.0;     // max |beta*xi*(y - y_mt)|
    double max_superheat = 0.0;    // max beta*xi*(y - y_mt), signed
    std::size_t level = 0;         // where max_coupling is attained
    std::size_t node = 0;
    double excess = -kPhysicalityBound;  // max_coupling - sqrt(3)/36
    bool realistic = true;
};

/// Accumulates a PhysicalityReport frame by frame.
///
/// Linear kind: realistic iff |beta*xi*(y - y_mt)| < sqrt(3)/36 everywhere, i.e. the
/// reaction term keeps three roots. Limiter kind: 0 and 1 stay roots for any
/// temperature and the liquid root is always stable, so the run is realistic
/// while the solid root stays stable, beta*xi*(y - y_mt) < 1.
class PhysicalityMonitor {
public:
    explicit PhysicalityMonitor(const ModelParams& params) : params_(params) {}

    void observe(const double* y, std::size_t n, std::size_t level) noexcept;
    PhysicalityReport report() const noexcept;

private:
    ModelParams params_;
    PhysicalityReport acc_;
    bool seen_ = false;
};

}  // namespace pfc
