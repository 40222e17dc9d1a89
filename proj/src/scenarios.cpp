#include "pfcontrol/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "pfcontrol/errors.hpp"

namespace pfc {

Field tanh_profile(const std::vector<Interface1D>& interfaces, double xi, const Grid& grid) {
    Field out(grid, 1.0);
    for (std::size_t i = 0; i < grid.n1(); ++i)
        for (std::size_t j = 0; j < grid.n2(); ++j) {
            double v = 1.0;
            for (const auto& itf : interfaces)
                v *= 0.5 * (1.0 - itf.orientation * std::tanh((grid.x1(i) - itf.position) / (2.0 * xi)));
            out.at(i, j) = v;
        }
    return out;
}

namespace {

double shape_distance(const Shape& shape, double x1, double x2) {
    struct Visitor {
        double x1;
        double x2;
        double operator()(const Interval& s) const { return std::max(s.lo - x1, x1 - s.hi); }
        double operator()(const Rect& s) const {
            const double d1 = std::max(s.lo[0] - x1, x1 - s.hi[0]);
            const double d2 = std::max(s.lo[1] - x2, x2 - s.hi[1]);
            const double outside = std::hypot(std::max(d1, 0.0), std::max(d2, 0.0));
            return outside + std::min(std::max(d1, d2), 0.0);
        }
        double operator()(const Disc& s) const {
            return std::hypot(x1 - s.centre[0], x2 - s.centre[1]) - s.radius;
        }
    };
    return std::visit(Visitor{x1, x2}, shape);
}

}  // namespace

double signed_distance(const Region& region, double x1, double x2) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : region) d = std::min(d, shape_distance(s, x1, x2));
    return d;
}

Field indicator_profile(const Region& region, const Grid& grid) {
    Field out(grid, 0.0);
    for (std::size_t i = 0; i < grid.n1(); ++i)
        for (std::size_t j = 0; j < grid.n2(); ++j)
            out.at(i, j) = signed_distance(region, grid.x1(i), grid.x2(j)) <= 0.0 ? 1.0 : 0.0;
    return out;
}

Field diffuse_profile(const Region& region, double xi, const Grid& grid) {
    Field out(grid, 0.0);
    if (region.empty()) return out;
    for (std::size_t i = 0; i < grid.n1(); ++i)
        for (std::size_t j = 0; j < grid.n2(); ++j)
            out.at(i, j) = 0.5 * (1.0 - std::tanh(signed_distance(region, grid.x1(i), grid.x2(j)) / (2.0 * xi)));
    return out;
}

InterfaceCurves extract_interface(const Field& ytilde, const Grid& grid) {
    if (!ytilde.matches(grid)) throw ShapeMismatch("phase field does not match the grid");
    constexpr double level = 0.5;
    InterfaceCurves out;
    if (grid.dim() == 1) {
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            const double a = ytilde[i] - level;
            if (a == 0.0) {
                out.points.push_back(grid.x1(i));
                continue;
            }
            if (i + 1 == grid.n1()) break;
            const double b = ytilde[i + 1] - level;
            if (a * b < 0.0) out.points.push_back(grid.x1(i) + grid.dx1() * a / (a - b));
        }
        return out;
    }

    for (std::size_t i = 0; i + 1 < grid.n1(); ++i)
        for (std::size_t j = 0; j + 1 < grid.n2(); ++j) {
            const double v00 = ytilde.at(i, j);
            const double v10 = ytilde.at(i + 1, j);
            const double v11 = ytilde.at(i + 1, j + 1);
            const double v01 = ytilde.at(i, j + 1);
            const int code = (v00 > level ? 1 : 0) | (v10 > level ? 2 : 0) | (v11 > level ? 4 : 0) |
                             (v01 > level ? 8 : 0);
            if (code == 0 || code == 15) continue;

            const double x0 = grid.x1(i);
            const double y0 = grid.x2(j);
            const double hx = grid.dx1();
            const double hy = grid.dx2();
            const auto lerp = [](double va, double vb) { return (level - va) / (vb - va); };
            // Crossing points on the cell edges: bottom, right, top, left.
            const auto edge = [&](int e) -> std::array<double, 2> {
                switch (e) {
                    case 0: return {x0 + hx * lerp(v00, v10), y0};
                    case 1: return {x0 + hx, y0 + hy * lerp(v10, v11)};
                    case 2: return {x0 + hx * lerp(v01, v11), y0 + hy};
                    default: return {x0, y0 + hy * lerp(v00, v01)};
                }
            };
            const auto emit = [&](int ea, int eb) { out.segments.push_back({edge(ea), edge(eb)}); };
            const bool centre_inside = 0.25 * (v00 + v10 + v11 + v01) > level;
            switch (code) {
                case 1: case 14: emit(3, 0); break;
                case 2: case 13: emit(0, 1); break;
                case 3: case 12: emit(3, 1); break;
                case 4: case 11: emit(1, 2); break;
                case 6: case 9: emit(0, 2); break;
                case 7: case 8: emit(3, 2); break;
                case 5:
                    if (centre_inside) { emit(0, 1); emit(2, 3); }
                    else { emit(3, 0); emit(1, 2); }
                    break;
                case 10:
                    if (centre_inside) { emit(3, 0); emit(1, 2); }
                    else { emit(0, 1); emit(2, 3); }
                    break;
                default: break;
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

namespace {

ModelParams params_1d(double alpha) {
    ModelParams p;
    p.gamma = 1.0;
    p.beta = 2.0;
    p.xi = 0.005;
    p.y_mt = 0.5;
    p.H = 1.0;
    p.alpha = alpha;
    p.reaction = ReactionKind::linear;
    return p;
}

ModelParams params_2d(ReactionKind kind) {
    ModelParams p;
    p.gamma = 3.0;
    p.beta = 300.0;
    p.xi = 0.0101;
    p.y_mt = 1.0;
    p.H = 2.0;
    p.eps0 = 0.0;
    p.eps1 = 0.2;
    p.reaction = kind;
    return p;
}

GridSpec grid_1d(std::size_t nx, std::size_t nt, double T) {
    GridSpec g;
    g.dim = 1;
    g.lengths = {1.0, 0.0};
    g.counts = {nx, 1};
    g.time_levels = nt;
    g.final_time = T;
    return g;
}

GridSpec grid_2d() {
    GridSpec g;
    g.dim = 2;
    g.lengths = {0.6, 1.0};
    g.counts = {60, 100};
    g.time_levels = 8000;
    g.final_time = 0.081;
    return g;
}

/// 1D control with one constant value per side.
BoundaryControl sided_control(const Grid& grid, double left, double right) {
    BoundaryControl u(grid, 0.0);
    for (std::size_t k = 0; k < u.levels(); ++k) {
        u.at(k, 0) = left;
        u.at(k, 1) = right;
    }
    return u;
}

Field pointwise_max(std::initializer_list<Field> fields) {
    Field out = *fields.begin();
    for (const auto& f : fields)
        for (std::size_t n = 0; n < out.size(); ++n) out[n] = std::max(out[n], f[n]);
    return out;
}

// Published step sizes belong to a differently normalised gradient. One factor per
// dimension maps them onto the measure-weighted gradient used here; the 1D factor
// was calibrated by step sweeps on exp4 and exp5 (both best near 1e-8), the 2D
// factor by sweeps on move2d-limiter at reduced resolution.
constexpr double kStepScale1D = 1e-8;
constexpr double kStepScale2D = 1e4;

OptimizeConfig schedule(std::vector<StepStage> stages, double scale) {
    OptimizeConfig c;
    c.schedule = std::move(stages);
    c.step_scale = scale;
    return c;
}

/// Experiments 1-3: a seed at the nucleation site x = 0 grown to [0, 0.5].
void build_extent(ScenarioSpec& s, const Grid& grid, double y_ini) {
    s.y_ini = Field(grid, y_ini);
    s.ytilde_ini = tanh_profile({{0.05, +1}}, s.params.xi, grid);
    s.ytilde_bc = {1.0, 0.0};
    s.target = indicator_profile({Interval{0.0, 0.5}}, grid);
    s.u0 = sided_control(grid, 0.0, 1.0);
}

/// Experiments 4-8: two interior crystals grow to the walls, the central gap stays liquid.
void build_separation(ScenarioSpec& s, const Grid& grid, double y_ini, bool symmetric_guess) {
    const double xi = s.params.xi;
    s.y_ini = Field(grid, y_ini);
    // Walls are solid (ytilde_bc = 1), so the initial field carries thin wall layers too.
    s.ytilde_ini = pointwise_max({tanh_profile({{0.25, -1}, {0.4, +1}}, xi, grid),
                                  tanh_profile({{0.6, -1}, {0.75, +1}}, xi, grid),
                                  tanh_profile({{0.02, +1}}, xi, grid), tanh_profile({{0.98, -1}}, xi, grid)});
    s.target = pointwise_max({tanh_profile({{0.4, +1}}, xi, grid), tanh_profile({{0.6, -1}}, xi, grid)});
    s.ytilde_bc = {1.0, 1.0};
    s.u0 = symmetric_guess ? sided_control(grid, 0.0, 0.0) : sided_control(grid, 0.0, 1.0);
}

void build_gap(ScenarioSpec& s, const Grid& grid, double y_ini) {
    const double xi = s.params.xi;
    s.y_ini = Field(grid, y_ini);
    s.ytilde_ini = pointwise_max({tanh_profile({{0.55, +1}}, xi, grid), tanh_profile({{0.65, -1}}, xi, grid)});
    s.target = pointwise_max({tanh_profile({{0.3, +1}}, xi, grid), tanh_profile({{0.4, -1}}, xi, grid)});
    s.ytilde_bc = {1.0, 1.0};
    s.u0 = sided_control(grid, 0.0, 0.0);
}

const Region kMoveInitial{Disc{{0.38, 0.72}, 0.12}};
const Region kMoveTarget{Disc{{0.3, 0.3}, 0.12}};
const Region kSeparateInitial{Rect{{0.2, 0.3}, {0.4, 0.7}}};
const Region kSeparateTarget{Disc{{0.3, 0.22}, 0.1}, Disc{{0.3, 0.78}, 0.1}};

void build_planar(ScenarioSpec& s, const Grid& grid, double y_ini, const Region& initial, const Region& target) {
    s.y_ini = Field(grid, y_ini);
    s.ytilde_ini = diffuse_profile(initial, s.params.xi, grid);
    s.target = diffuse_profile(target, s.params.xi, grid);
    s.ytilde_bc.assign(grid.boundary_size(), 0.0);
    s.u0 = BoundaryControl(grid, 1.0);
}

using Builder = std::function<void(ScenarioSpec&, const Grid&, double y_ini)>;

struct PresetEntry {
    const char* name;
    const char* summary;
    const char* reconstruction;
    GridSpec grid;
    ModelParams params;
    double y_ini;
    std::vector<StepStage> stages;  // published iteration counts and steps
    double step_scale;
    Builder build;
};

const char* const kExtentNote =
    "seed interface at x=0.05, uniform y_ini, ytilde_bc=(1,0), target = indicator of [0,0.5], guess u0=(0,1)";
const char* const kSeparationNote =
    "crystals on [0.25,0.4] and [0.6,0.75] plus thin wall layers, uniform y_ini, ytilde_bc=(1,1), "
    "target solid on [0,0.4] and [0.6,1]";
const char* const kGapNote =
    "solid except a liquid gap on [0.55,0.65], uniform y_ini, ytilde_bc=(1,1), target gap on [0.3,0.4], u0=0";
const char* const kMoveNote = "disc r=0.12 at (0.38,0.72) moved to (0.3,0.3), ytilde_bc=0, u0=1";
const char* const kSeparateNote =
    "rectangle [0.2,0.4]x[0.3,0.7] split into discs r=0.1 at (0.3,0.22) and (0.3,0.78), ytilde_bc=0, u0=1";

const std::vector<PresetEntry>& registry() {
    const auto extent = [](ScenarioSpec& s, const Grid& g, double y) { build_extent(s, g, y); };
    const auto separation = [](ScenarioSpec& s, const Grid& g, double y) { build_separation(s, g, y, false); };
    const auto planar = [](const Region& a, const Region& b) {
        return [&a, &b](ScenarioSpec& s, const Grid& g, double y) { build_planar(s, g, y, a, b); };
    };
    static const std::vector<PresetEntry> entries = {
        {"exp1", "1D extent control, T=0.1, alpha=0", kExtentNote, grid_1d(400, 400000, 0.1), params_1d(0.0), 0.5,
         {{100, 3e15}}, kStepScale1D, extent},
        {"exp2", "1D extent control, T=0.05, alpha=0", kExtentNote, grid_1d(400, 400000, 0.05), params_1d(0.0), 0.5,
         {{100, 2e16}}, kStepScale1D, extent},
        {"exp3", "1D extent control, T=0.05, alpha=5e-11", kExtentNote, grid_1d(400, 400000, 0.05),
         params_1d(5e-11), 0.5, {{100, 2e16}}, kStepScale1D, extent},
        {"exp4", "1D separation, T=0.05, asymmetric guess", kSeparationNote, grid_1d(200, 100000, 0.05),
         params_1d(0.0), 0.5, {{150, 2e14}}, kStepScale1D, separation},
        {"exp5", "1D separation, T=0.4, asymmetric guess", kSeparationNote, grid_1d(200, 100000, 0.4),
         params_1d(0.0), 0.5, {{100, 3e13}}, kStepScale1D, separation},
        {"exp6", "1D separation, T=0.4, alpha=5e-10", kSeparationNote, grid_1d(200, 100000, 0.4), params_1d(5e-10),
         0.5, {{100, 1e13}}, kStepScale1D, separation},
        {"exp7", "1D separation, T=0.4, alpha=1e-9", kSeparationNote, grid_1d(200, 100000, 0.4), params_1d(1e-9),
         0.5, {{125, 1e13}}, kStepScale1D, separation},
        {"exp8", "1D separation, T=0.4, symmetric guess u0=0", kSeparationNote, grid_1d(200, 100000, 0.4),
         params_1d(0.0), 0.5, {{100, 3e14}}, kStepScale1D,
         [](ScenarioSpec& s, const Grid& g, double y) { build_separation(s, g, y, true); }},
        {"exp9", "1D gap move, two-stage step schedule", kGapNote, grid_1d(200, 100000, 0.1), params_1d(0.0), 0.5,
         {{225, 1e16}, {25, 5e15}}, kStepScale1D,
         [](ScenarioSpec& s, const Grid& g, double y) { build_gap(s, g, y); }},
        {"move2d-linear", "2D crystal move, linear reaction", kMoveNote, grid_2d(),
         params_2d(ReactionKind::linear), 1.0, {{400, 5.0}}, kStepScale2D,
         planar(kMoveInitial, kMoveTarget)},
        {"move2d-limiter", "2D crystal move, limiter reaction", kMoveNote, grid_2d(),
         params_2d(ReactionKind::limiter), 1.0, {{5000, 5.0}}, kStepScale2D,
         planar(kMoveInitial, kMoveTarget)},
        {"separate2d", "2D crystal separation, limiter reaction", kSeparateNote, grid_2d(),
         params_2d(ReactionKind::limiter), 1.0, {{1000, 7.5}}, kStepScale2D,
         planar(kSeparateInitial, kSeparateTarget)},
    };
    return entries;
}

const PresetEntry& find(std::string_view name) {
    for (const auto& e : registry())
        if (name == e.name) return e;
    std::string names;
    for (const auto& e : registry()) names += std::string(names.empty() ? "" : ", ") + e.name;
    throw InvalidSpec("run.scenario", "unknown preset '" + std::string(name) + "'; available: " + names);
}

}  // namespace

std::vector<PresetInfo> list_presets() {
    std::vector<PresetInfo> out;
    for (const auto& e : registry()) out.push_back({e.name, e.summary, e.grid});
    return out;
}

PresetDefaults preset_defaults(std::string_view name) {
    const auto& e = find(name);
    return {e.grid, e.params, e.y_ini, schedule(e.stages, e.step_scale)};
}

ScenarioSpec builtin(std::string_view name) { return builtin(name, preset_defaults(name)); }

ScenarioSpec builtin(std::string_view name, const PresetDefaults& settings) {
    const auto& e = find(name);
    settings.grid.validate();
    settings.params.validate();
    ScenarioSpec s;
    s.name = e.name;
    s.description = std::string(e.summary) + "; " + e.reconstruction;
    s.grid = settings.grid;
    s.params = settings.params;
    s.optimize = settings.optimize;
    const Grid grid(s.grid);
    e.build(s, grid, settings.y_ini);
    s.validate(grid);
    return s;
}

}  // namespace pfc
