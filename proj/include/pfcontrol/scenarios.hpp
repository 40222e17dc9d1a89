#pragma once

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pfcontrol/grid.hpp"
#include "pfcontrol/problem.hpp"

namespace pfc {

/// A single diffuse interface in 1D. orientation +1 puts the solid (value 1)
/// on the left of `position`, -1 on the right.
struct Interface1D {
    double position = 0.0;
    int orientation = 1;
};

/// Product of 1/2 [1 - o tanh((x - x0) / (2 xi))] factors, one per interface.
Field tanh_profile(const std::vector<Interface1D>& interfaces, double xi, const Grid& grid);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};
struct Rect {
    std::array<double, 2> lo{};
    std::array<double, 2> hi{};
};
struct Disc {
    std::array<double, 2> centre{};
    double radius = 0.0;
};
using Shape = std::variant<Interval, Rect, Disc>;
/// Union of shapes; empty means the empty set.
using Region = std::vector<Shape>;

/// Signed distance to the region boundary, negative inside.
double signed_distance(const Region& region, double x1, double x2);

/// 1 inside (boundary inclusive), 0 outside.
Field indicator_profile(const Region& region, const Grid& grid);

/// 1/2 [1 - tanh(d / (2 xi))] of the signed distance d; the multi-dimensional
/// analogue of tanh_profile, keeping the profile along the normal.
Field diffuse_profile(const Region& region, double xi, const Grid& grid);

struct Segment {
    std::array<double, 2> a{};
    std::array<double, 2> b{};
};

/// Level-1/2 set of a phase field: crossing positions in 1D, marching-squares
/// segments in 2D.
struct InterfaceCurves {
    std::vector<double> points;
    std::vector<Segment> segments;
};

InterfaceCurves extract_interface(const Field& ytilde, const Grid& grid);

struct PresetInfo {
    std::string name;
    std::string summary;
    GridSpec grid;
};

/// All presets in their stable listing order.
std::vector<PresetInfo> list_presets();

/// Knobs a preset is built from. Grid-dependent fields (profiles, guess) are
/// regenerated from these, so overriding the grid resizes the whole scenario.
struct PresetDefaults {
    GridSpec grid;
    ModelParams params;
    double y_ini = 0.0;  // uniform initial temperature
    OptimizeConfig optimize;
};

/// Throws InvalidSpec listing the valid names when `name` is unknown.
PresetDefaults preset_defaults(std::string_view name);

/// Fully populated preset; throws InvalidSpec listing the valid names when `name` is unknown.
ScenarioSpec builtin(std::string_view name);
ScenarioSpec builtin(std::string_view name, const PresetDefaults& settings);

}  // namespace pfc
