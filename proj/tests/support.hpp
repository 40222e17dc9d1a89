#pragma once

#include <string>

#include "pfcontrol/problem.hpp"
#include "pfcontrol/scenarios.hpp"

namespace pfc::testing {

/// A preset rebuilt on a smaller grid.
inline ScenarioSpec reduced(const std::string& name, std::size_t n1, std::size_t nt, double T, std::size_t n2 = 0) {
    PresetDefaults d = preset_defaults(name);
    d.grid.counts[0] = n1;
    if (n2 != 0) d.grid.counts[1] = n2;
    d.grid.time_levels = nt;
    d.grid.final_time = T;
    return builtin(name, d);
}

inline GridSpec grid1d(std::size_t n, std::size_t nt, double T, double L = 1.0) {
    GridSpec g;
    g.dim = 1;
    g.lengths = {L, 0.0};
    g.counts = {n, 1};
    g.time_levels = nt;
    g.final_time = T;
    return g;
}

inline GridSpec grid2d(std::size_t n1, std::size_t n2, std::size_t nt, double T, double L1, double L2) {
    GridSpec g;
    g.dim = 2;
    g.lengths = {L1, L2};
    g.counts = {n1, n2};
    g.time_levels = nt;
    g.final_time = T;
    return g;
}

inline ModelParams table1() {
    ModelParams p;
    p.gamma = 1.0;
    p.beta = 2.0;
    p.xi = 0.005;
    p.y_mt = 0.5;
    p.H = 1.0;
    return p;
}

inline ModelParams table6(ReactionKind kind) {
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

}  // namespace pfc::testing
