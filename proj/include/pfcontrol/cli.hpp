#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pfcontrol/control.hpp"
#include "pfcontrol/grid.hpp"
#include "pfcontrol/optimize.hpp"
#include "pfcontrol/problem.hpp"
#include "pfcontrol/scenarios.hpp"
#include "pfcontrol/trajectory.hpp"

namespace pfc::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_blow_up = 3,
    exit_gradcheck_failed = 4,
};

/// One `section.key = value` assignment and where it came from.
struct Setting {
    std::string key;
    std::string value;
    std::string origin;  // "file:line" or "--override"
};

/// Parses the flat config format: one `section.key = value` per line, `#` starts a comment.
std::vector<Setting> parse_config(std::string_view text, const std::string& origin);
std::vector<Setting> read_config_file(const std::filesystem::path& path);
/// Parses `section.key=value`.
Setting parse_override(std::string_view text);

/// Every accepted key with a one-line description, in documentation order.
const std::vector<std::pair<std::string, std::string>>& known_keys();

struct GradcheckOptions {
    std::size_t directions = 5;
    double h = 1e-3;
    double threshold = 1e-3;
    std::uint64_t seed = 1;
};

struct RunConfig {
    ScenarioSpec scenario;  // fully resolved, overrides applied
    std::filesystem::path output = "out";
    std::vector<double> snapshot_times;  // empty means {0, T}
    bool export_snapshots = true;
    bool export_interface = true;
    bool export_control = true;
    bool export_final = true;
    StoragePolicy storage;
    GradcheckOptions gradcheck;
    bool self_target = false;  // target was replaced by the final phase field under u0
};

/// Applies settings in order (later wins) to the preset named by `run.scenario`.
/// Unknown keys and malformed values throw InvalidSpec naming the key.
RunConfig resolve(const std::vector<Setting>& settings);

// CSV and file export; numbers use the shortest round-trip decimal form.
std::string format_double(double v);
std::string control_csv(const BoundaryControl& u, const Grid& grid);
BoundaryControl parse_control_csv(std::string_view text, const Grid& grid);
std::string field_csv(std::span<const double> y, std::span<const double> ytilde, const Grid& grid);
std::string history_csv(const DescentHistory& history);
/// 2D: t,segment_id,x1a,x2a,x1b,x2b. 1D: t,point_id,x1.
std::string interface_csv(const std::vector<std::pair<double, InterfaceCurves>>& curves, const Grid& grid);
/// Writes to a temporary sibling, then renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

int cmd_list(std::ostream& out);
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_gradcheck(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace pfc::cli
