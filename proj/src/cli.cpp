#include "pfcontrol/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "pfcontrol/errors.hpp"
#include "pfcontrol/forward.hpp"
#include "pfcontrol/objective.hpp"

namespace pfc::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) return parts;
        start = pos + 1;
    }
}

double to_double(const std::string& key, std::string_view text) {
    const std::string s(trim(text));
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
        throw InvalidSpec(key, "expected a finite number, got '" + s + "'");
    return v;
}

std::size_t to_count(const std::string& key, std::string_view text) {
    const auto s = trim(text);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw InvalidSpec(key, "expected a non-negative integer, got '" + std::string(s) + "'");
    return v;
}

bool to_bool(const std::string& key, std::string_view text) {
    const auto s = trim(text);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw InvalidSpec(key, "expected true or false, got '" + std::string(s) + "'");
}

std::vector<StepStage> to_schedule(const std::string& key, std::string_view text) {
    std::vector<StepStage> stages;
    for (auto part : split(text, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string_view::npos)
            throw InvalidSpec(key, "expected iterations:step pairs, got '" + std::string(part) + "'");
        stages.push_back({to_count(key, part.substr(0, colon)), to_double(key, part.substr(colon + 1))});
    }
    return stages;
}

/// Mutable view of everything a setting may touch while resolving.
struct Draft {
    PresetDefaults preset;
    RunConfig run;
    std::optional<double> u0;
    bool self_target = false;
};

using Apply = std::function<void(Draft&, const std::string& key, std::string_view value)>;

struct KeySpec {
    const char* key;
    const char* help;
    Apply apply;
};

const std::vector<KeySpec>& schema() {
    static const std::vector<KeySpec> keys = {
        {"run.scenario", "preset name (see `list`)", [](Draft&, const std::string&, std::string_view) {}},
        {"run.output", "output directory",
         [](Draft& d, const std::string&, std::string_view v) { d.run.output = std::string(trim(v)); }},
        {"run.snapshots", "comma-separated snapshot times in [0, T]",
         [](Draft& d, const std::string& k, std::string_view v) {
             d.run.snapshot_times.clear();
             if (!trim(v).empty())
                 for (auto t : split(v, ',')) d.run.snapshot_times.push_back(to_double(k, t));
         }},
        {"run.export_snapshots", "write snapshot_<k>.csv files",
         [](Draft& d, const std::string& k, std::string_view v) { d.run.export_snapshots = to_bool(k, v); }},
        {"run.export_interface", "write interface.csv",
         [](Draft& d, const std::string& k, std::string_view v) { d.run.export_interface = to_bool(k, v); }},
        {"run.export_control", "write control.csv",
         [](Draft& d, const std::string& k, std::string_view v) { d.run.export_control = to_bool(k, v); }},
        {"run.export_final", "write final_state.csv",
         [](Draft& d, const std::string& k, std::string_view v) { d.run.export_final = to_bool(k, v); }},
        {"run.storage", "trajectory storage: auto, full or checkpointed",
         [](Draft& d, const std::string& k, std::string_view v) {
             const auto s = trim(v);
             if (s == "auto") d.run.storage.mode = StorageMode::automatic;
             else if (s == "full") d.run.storage.mode = StorageMode::full;
             else if (s == "checkpointed") d.run.storage.mode = StorageMode::checkpointed;
             else throw InvalidSpec(k, "expected auto, full or checkpointed, got '" + std::string(s) + "'");
         }},
        {"run.budget_mb", "memory budget for automatic storage, MiB",
         [](Draft& d, const std::string& k, std::string_view v) {
             d.run.storage.budget_bytes = to_count(k, v) << 20;
         }},
        {"run.stride", "checkpoint spacing, 0 = about sqrt(Nt)",
         [](Draft& d, const std::string& k, std::string_view v) { d.run.storage.stride = to_count(k, v); }},
        {"grid.L1", "domain length along x1",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.grid.lengths[0] = to_double(k, v); }},
        {"grid.L2", "domain length along x2 (2D)",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.grid.lengths[1] = to_double(k, v); }},
        {"grid.N1", "nodes along x1",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.grid.counts[0] = to_count(k, v); }},
        {"grid.N2", "nodes along x2 (2D)",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.grid.counts[1] = to_count(k, v); }},
        {"grid.Nt", "time levels",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.grid.time_levels = to_count(k, v); }},
        {"grid.T", "final time",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.grid.final_time = to_double(k, v); }},
        {"model.gamma", "relaxation time gamma",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.params.gamma = to_double(k, v); }},
        {"model.beta", "kinetic coefficient beta",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.params.beta = to_double(k, v); }},
        {"model.xi", "interface thickness xi",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.params.xi = to_double(k, v); }},
        {"model.y_mt", "melting temperature",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.params.y_mt = to_double(k, v); }},
        {"model.H", "latent heat",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.params.H = to_double(k, v); }},
        {"model.alpha", "control cost weight",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.params.alpha = to_double(k, v); }},
        {"model.reaction", "linear or limiter",
         [](Draft& d, const std::string& k, std::string_view v) {
             const auto s = trim(v);
             if (s == "linear") d.preset.params.reaction = ReactionKind::linear;
             else if (s == "limiter") d.preset.params.reaction = ReactionKind::limiter;
             else throw InvalidSpec(k, "expected linear or limiter, got '" + std::string(s) + "'");
         }},
        {"model.eps0", "limiter cutoff eps0",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.params.eps0 = to_double(k, v); }},
        {"model.eps1", "limiter cutoff eps1",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.params.eps1 = to_double(k, v); }},
        {"scenario.y_ini", "uniform initial temperature",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.y_ini = to_double(k, v); }},
        {"scenario.u0", "replace the initial guess by this constant",
         [](Draft& d, const std::string& k, std::string_view v) { d.u0 = to_double(k, v); }},
        {"scenario.self_target", "use the final phase field under u0 as target",
         [](Draft& d, const std::string& k, std::string_view v) { d.self_target = to_bool(k, v); }},
        {"opt.iterations", "number of descent iterations (cuts or extends the schedule)",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.optimize.set_iterations(to_count(k, v)); }},
        {"opt.step", "step size of every schedule stage",
         [](Draft& d, const std::string& k, std::string_view v) {
             const double step = to_double(k, v);
             for (auto& s : d.preset.optimize.schedule) s.step = step;
         }},
        {"opt.schedule", "stages as iterations:step,iterations:step",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.optimize.schedule = to_schedule(k, v); }},
        {"opt.step_scale", "multiplier applied to every step",
         [](Draft& d, const std::string& k, std::string_view v) { d.preset.optimize.step_scale = to_double(k, v); }},
        {"opt.grad_stop", "stop once the gradient norm falls below this (0 disables)",
         [](Draft& d, const std::string& k, std::string_view v) {
             d.preset.optimize.grad_norm_stop = to_double(k, v);
         }},
        {"opt.history_every", "record every n-th iteration in history.csv",
         [](Draft& d, const std::string& k, std::string_view v) {
             d.preset.optimize.history_every = to_count(k, v);
         }},
        {"gradcheck.directions", "number of random directions",
         [](Draft& d, const std::string& k, std::string_view v) { d.run.gradcheck.directions = to_count(k, v); }},
        {"gradcheck.h", "central difference step",
         [](Draft& d, const std::string& k, std::string_view v) { d.run.gradcheck.h = to_double(k, v); }},
        {"gradcheck.threshold", "largest accepted relative error",
         [](Draft& d, const std::string& k, std::string_view v) { d.run.gradcheck.threshold = to_double(k, v); }},
        {"gradcheck.seed", "seed of the direction generator",
         [](Draft& d, const std::string& k, std::string_view v) { d.run.gradcheck.seed = to_count(k, v); }},
    };
    return keys;
}

const KeySpec& lookup(const std::string& key) {
    for (const auto& k : schema())
        if (key == k.key) return k;
    throw InvalidSpec(key, "unknown configuration key");
}

}  // namespace

std::vector<Setting> parse_config(std::string_view text, const std::string& origin) {
    std::vector<Setting> out;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(line_no);
        if (eq == std::string_view::npos) throw InvalidSpec(where, "expected 'section.key = value'");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw InvalidSpec(where, "missing key");
        out.push_back({key, std::string(trim(line.substr(eq + 1))), where});
    }
    return out;
}

std::vector<Setting> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidSpec("--config", "cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

Setting parse_override(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
        throw InvalidSpec(std::string(text), "override must look like section.key=value");
    return {std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1))), "--override"};
}

const std::vector<std::pair<std::string, std::string>>& known_keys() {
    static const auto keys = [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& k : schema()) out.emplace_back(k.key, k.help);
        return out;
    }();
    return keys;
}

RunConfig resolve(const std::vector<Setting>& settings) {
    std::string name;
    for (const auto& s : settings) {
        lookup(s.key);
        if (s.key == "run.scenario") name = s.value;
    }
    if (name.empty()) throw InvalidSpec("run.scenario", "no scenario given");

    Draft d;
    d.preset = preset_defaults(name);
    for (const auto& s : settings) lookup(s.key).apply(d, s.key, s.value);

    RunConfig run = d.run;
    run.scenario = builtin(name, d.preset);
    const Grid grid(run.scenario.grid);
    run.scenario.optimize.validate();
    if (d.u0) run.scenario.u0 = BoundaryControl(grid, *d.u0);
    if (d.self_target) {
        const auto fwd = solve_forward(run.scenario, run.scenario.u0, run.scenario.params, grid,
                                       StoragePolicy{StorageMode::final_only});
        run.scenario.target = fwd.final.ytilde;
        run.scenario.description += "; target = final phase field under u0";
        run.self_target = true;
    }
    for (double t : run.snapshot_times)
        if (!(t >= 0.0 && t <= grid.final_time()))
            throw InvalidSpec("run.snapshots", "time " + format_double(t) + " outside [0, T]");
    if (run.gradcheck.directions == 0) throw InvalidSpec("gradcheck.directions", "must be positive");
    if (!(run.gradcheck.h > 0.0)) throw InvalidSpec("gradcheck.h", "must be positive");
    if (!(run.gradcheck.threshold > 0.0)) throw InvalidSpec("gradcheck.threshold", "must be positive");
    run.scenario.validate(grid);
    return run;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string control_csv(const BoundaryControl& u, const Grid& grid) {
    if (!u.matches(grid)) throw ShapeMismatch("control does not match the grid");
    std::string out = "k,t,edge,i,x1,x2,u\n";
    const auto points = grid.boundary();
    for (std::size_t k = 0; k < u.levels(); ++k) {
        const std::string t = format_double(grid.time(k));
        const auto uk = u.level(k);
        for (std::size_t b = 0; b < points.size(); ++b) {
            const auto& p = points[b];
            const std::size_t i = p.node / grid.n2();
            const std::size_t j = p.node % grid.n2();
            out += std::to_string(k);
            out += ',';
            out += t;
            out += ',';
            out += to_string(p.edge);
            out += ',';
            out += std::to_string(p.along);
            out += ',';
            out += format_double(grid.x1(i));
            out += ',';
            if (grid.dim() == 2) out += format_double(grid.x2(j));
            out += ',';
            out += format_double(uk[b]);
            out += '\n';
        }
    }
    return out;
}

BoundaryControl parse_control_csv(std::string_view text, const Grid& grid) {
    std::map<std::pair<std::string, std::size_t>, std::size_t> slot;
    const auto points = grid.boundary();
    for (std::size_t b = 0; b < points.size(); ++b) slot[{std::string(to_string(points[b].edge)), points[b].along}] = b;

    BoundaryControl u(grid, 0.0);
    std::vector<char> seen(u.size(), 0);
    const auto lines = split(text, '\n');
    if (lines.empty() || lines.front() != "k,t,edge,i,x1,x2,u")
        throw InvalidSpec("control.csv", "missing header k,t,edge,i,x1,x2,u");
    for (std::size_t n = 1; n < lines.size(); ++n) {
        if (lines[n].empty()) continue;
        const auto cols = split(lines[n], ',');
        const std::string where = "control.csv:" + std::to_string(n + 1);
        if (cols.size() != 7) throw InvalidSpec(where, "expected 7 columns");
        const std::size_t k = to_count(where, cols[0]);
        const auto it = slot.find({std::string(cols[2]), to_count(where, cols[3])});
        if (k >= u.levels() || it == slot.end()) throw InvalidSpec(where, "row does not match the grid");
        u.at(k, it->second) = to_double(where, cols[6]);
        seen[k * points.size() + it->second] = 1;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw InvalidSpec("control.csv", "missing values for some (k, boundary point) pairs");
    return u;
}

std::string field_csv(std::span<const double> y, std::span<const double> ytilde, const Grid& grid) {
    if (y.size() != grid.size() || ytilde.size() != grid.size()) throw ShapeMismatch("field does not match the grid");
    std::string out = "i,j,x1,x2,y,ytilde\n";
    for (std::size_t i = 0; i < grid.n1(); ++i)
        for (std::size_t j = 0; j < grid.n2(); ++j) {
            const std::size_t n = grid.index(i, j);
            out += std::to_string(i) + ',' + std::to_string(j) + ',' + format_double(grid.x1(i)) + ',' +
                   (grid.dim() == 2 ? format_double(grid.x2(j)) : std::string()) + ',' + format_double(y[n]) + ',' +
                   format_double(ytilde[n]) + '\n';
        }
    return out;
}

std::string history_csv(const DescentHistory& history) {
    std::string out = "iter,J,mismatch,reg,error_norm,grad_norm,phys_excess,wall_ms\n";
    for (const auto& r : history.records)
        out += std::to_string(r.iter) + ',' + format_double(r.J) + ',' + format_double(r.mismatch) + ',' +
               format_double(r.regularization) + ',' + format_double(r.error_norm) + ',' +
               format_double(r.grad_norm) + ',' + format_double(r.phys_excess) + ',' + format_double(r.wall_ms) +
               '\n';
    return out;
}

std::string interface_csv(const std::vector<std::pair<double, InterfaceCurves>>& curves, const Grid& grid) {
    std::string out = grid.dim() == 2 ? "t,segment_id,x1a,x2a,x1b,x2b\n" : "t,point_id,x1\n";
    for (const auto& [t, c] : curves) {
        const std::string ts = format_double(t);
        if (grid.dim() == 2) {
            for (std::size_t s = 0; s < c.segments.size(); ++s) {
                const auto& seg = c.segments[s];
                out += ts + ',' + std::to_string(s) + ',' + format_double(seg.a[0]) + ',' + format_double(seg.a[1]) +
                       ',' + format_double(seg.b[0]) + ',' + format_double(seg.b[1]) + '\n';
            }
        } else {
            for (std::size_t p = 0; p < c.points.size(); ++p)
                out += ts + ',' + std::to_string(p) + ',' + format_double(c.points[p]) + '\n';
        }
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_list(std::ostream& out) {
    for (const auto& p : list_presets()) {
        out << p.name << "  " << p.grid.counts[0];
        if (p.grid.dim == 2) out << 'x' << p.grid.counts[1];
        out << " nodes, Nt=" << p.grid.time_levels << ", T=" << format_double(p.grid.final_time) << "  "
            << p.summary << '\n';
    }
    return exit_ok;
}

namespace {

std::vector<std::size_t> snapshot_levels(const RunConfig& config, const Grid& grid) {
    std::vector<double> times = config.snapshot_times;
    if (times.empty()) times = {0.0, grid.final_time()};
    std::vector<std::size_t> levels;
    for (double t : times) {
        const double k = std::round(t / grid.dt());
        levels.push_back(std::min(static_cast<std::size_t>(k), grid.time_levels() - 1));
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

nlohmann::ordered_json summary_json(const RunConfig& config, const DescentResult& result, double wall_ms,
                                    const std::string& status) {
    const auto& r = result.final_report;
    nlohmann::ordered_json j;
    j["scenario"] = config.scenario.name;
    j["status"] = status;
    j["iterations"] = result.iterations;
    j["J"] = r.J;
    j["mismatch"] = r.mismatch;
    j["regularization"] = r.regularization;
    j["error_norm"] = r.error_norm;
    j["realistic"] = r.physicality.realistic;
    j["realistic_throughout"] = result.realistic_throughout;
    j["phys_excess"] = r.physicality.excess;
    j["max_phys_excess"] = result.max_phys_excess;
    j["max_superheat"] = r.physicality.max_superheat;
    j["stopped_on_gradient"] = result.stopped_on_gradient;
    j["wall_ms"] = wall_ms;
    if (result.failure) {
        j["failure"] = result.failure->what();
        j["failure_level"] = result.failure->level();
    }
    return j;
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    const ScenarioSpec& spec = config.scenario;
    const Grid grid(spec.grid);
    std::filesystem::create_directories(config.output);

    out << spec.name << ": " << spec.description << '\n';
    out << "grid " << grid.n1();
    if (grid.dim() == 2) out << 'x' << grid.n2();
    out << ", Nt=" << grid.time_levels() << ", dt=" << format_double(grid.dt())
        << ", iterations=" << spec.optimize.total_iterations() << '\n';
    if (grid.dt() > stability_bound(grid, spec.params))
        err << "warning: time step exceeds the explicit stability bound " << stability_bound(grid, spec.params)
            << '\n';

    const std::size_t total = spec.optimize.total_iterations();
    const std::size_t every = std::max<std::size_t>(1, total / 20);
    const auto progress = [&](const IterationRecord& r) {
        if (r.iter % every == 0 || r.iter == total)
            out << "iter " << r.iter << "  J=" << format_double(r.J) << "  error=" << format_double(r.error_norm)
                << "  |g|=" << format_double(r.grad_norm) << "  excess=" << format_double(r.phys_excess) << '\n';
    };
    DescentResult result = descend(spec, spec.params, grid, spec.optimize, config.storage, progress);
    const auto elapsed = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    };

    write_atomic(config.output / "history.csv", history_csv(result.history));
    if (result.failure) {
        write_atomic(config.output / "summary.json", summary_json(config, result, elapsed(), "blow_up").dump(2) + "\n");
        err << "error: " << result.failure->what() << '\n';
        return exit_blow_up;
    }

    const auto levels = snapshot_levels(config, grid);
    std::vector<std::pair<double, InterfaceCurves>> curves;
    const auto observer = [&](std::size_t k, std::span<const double> y, std::span<const double> yt) {
        if (!std::binary_search(levels.begin(), levels.end(), k)) return;
        if (config.export_snapshots)
            write_atomic(config.output / ("snapshot_" + std::to_string(k) + ".csv"), field_csv(y, yt, grid));
        if (config.export_interface) {
            Field f(grid);
            std::copy(yt.begin(), yt.end(), f.values().begin());
            curves.emplace_back(grid.time(k), extract_interface(f, grid));
        }
    };
    ForwardResult fwd;
    try {
        fwd = solve_forward(spec, result.u_opt, spec.params, grid, StoragePolicy{StorageMode::final_only}, observer);
    } catch (const BlowUp& e) {
        result.failure = e;
        write_atomic(config.output / "summary.json", summary_json(config, result, elapsed(), "blow_up").dump(2) + "\n");
        err << "error: " << e.what() << '\n';
        return exit_blow_up;
    }
    if (config.export_final) write_atomic(config.output / "final_state.csv", field_csv(fwd.final.y.values(), fwd.final.ytilde.values(), grid));
    if (config.export_control) write_atomic(config.output / "control.csv", control_csv(result.u_opt, grid));
    if (config.export_interface) write_atomic(config.output / "interface.csv", interface_csv(curves, grid));

    const auto summary = summary_json(config, result, elapsed(), "ok");
    write_atomic(config.output / "summary.json", summary.dump(2) + "\n");
    out << "error_norm=" << format_double(result.final_report.error_norm)
        << " J=" << format_double(result.final_report.J)
        << " realistic=" << (result.final_report.physicality.realistic ? "true" : "false")
        << " max_phys_excess=" << format_double(result.max_phys_excess) << '\n';
    return exit_ok;
}

int cmd_gradcheck(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const ScenarioSpec& spec = config.scenario;
    const Grid grid(spec.grid);
    const auto& opt = config.gradcheck;

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<BoundaryControl> directions;
    for (std::size_t d = 0; d < opt.directions; ++d) {
        BoundaryControl s(grid, 0.0);
        for (auto& v : s.values()) v = dist(rng);
        directions.push_back(std::move(s));
    }

    GradientCheckReport report;
    try {
        report = fd_gradient_check(spec, spec.params, grid, spec.u0, directions, opt.h, opt.threshold);
    } catch (const BlowUp& e) {
        err << "error: " << e.what() << '\n';
        return exit_blow_up;
    }
    // Under a self-target the mismatch derivative vanishes at u0, so the exact
    // directional derivative is alpha * <u0, s> and is gated instead of the difference quotient.
    const bool analytic = config.self_target;
    bool pass = true;
    double worst = 0.0;
    out << (analytic ? "direction,adjoint,finite_diff,analytic,rel_error,status\n"
                     : "direction,adjoint,finite_diff,rel_error,status\n");
    for (std::size_t d = 0; d < report.directions.size(); ++d) {
        const auto& c = report.directions[d];
        double rel = c.rel_error;
        double exact = 0.0;
        if (analytic) {
            exact = spec.params.alpha * boundary_quadrature(spec.u0, directions[d], grid);
            const double scale = std::max({std::abs(c.adjoint), std::abs(exact), 1e-300});
            rel = exact == c.adjoint ? 0.0 : std::abs(c.adjoint - exact) / scale;
        }
        worst = std::max(worst, rel);
        const bool ok = rel <= opt.threshold;
        pass = pass && ok;
        out << d << ',' << format_double(c.adjoint) << ',' << format_double(c.finite_diff) << ',';
        if (analytic) out << format_double(exact) << ',';
        out << format_double(rel) << ',' << (ok ? "pass" : "FAIL") << '\n';
        if (c.truncation_dominated && !analytic)
            err << "warning: direction " << d << " is truncation dominated at h=" << format_double(opt.h)
                << " (h and h/2 differ by " << format_double(std::abs(c.finite_diff - c.finite_diff_half))
                << "); try a smaller h\n";
    }
    out << "max_rel_error=" << format_double(worst) << " threshold=" << format_double(opt.threshold)
        << (pass ? " PASS" : " FAIL") << '\n';
    return pass ? exit_ok : exit_gradcheck_failed;
}

}  // namespace pfc::cli
