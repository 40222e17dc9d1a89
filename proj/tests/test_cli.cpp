#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pfcontrol/cli.hpp"
#include "pfcontrol/errors.hpp"
#include "pfcontrol/forward.hpp"
#include "support.hpp"

using namespace pfc;
using namespace pfc::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("pfcontrol_test_" + name);
    fs::remove_all(dir);
    return dir;
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(PFCONTROL_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// A small exp1 problem with every override path exercised.
std::vector<Setting> small_run(const fs::path& out) {
    return parse_config("run.scenario = exp1\n"
                        "run.output = " + out.string() + "\n"
                        "grid.N1 = 30\n"
                        "grid.Nt = 400\n"
                        "grid.T = 0.01   # short horizon\n"
                        "opt.iterations = 3\n"
                        "opt.step = 1000\n"
                        "opt.step_scale = 1\n"
                        "run.snapshots = 0, 0.005, 0.01\n",
                        "small.cfg");
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing keeps order, origins and ignores comments") {
    const auto s = parse_config("# header\n\nmodel.alpha = 1e-8  # trailing\n  grid.N1=64\n", "a.cfg");
    REQUIRE(s.size() == 2);
    CHECK(s[0].key == "model.alpha");
    CHECK(s[0].value == "1e-8");
    CHECK(s[0].origin == "a.cfg:3");
    CHECK(s[1].key == "grid.N1");
    CHECK(s[1].value == "64");
    CHECK(s[1].origin == "a.cfg:4");
    CHECK_THROWS_AS(parse_config("no equals sign\n", "b.cfg"), InvalidSpec);

    const auto o = parse_override("opt.iterations=7");
    CHECK(o.key == "opt.iterations");
    CHECK(o.value == "7");
    CHECK_THROWS_AS(parse_override("opt.iterations"), InvalidSpec);
}

TEST_CASE("resolve applies overrides in order") {
    auto s = small_run("unused");
    s.push_back({"model.alpha", "1e-9", "t"});
    s.push_back({"model.alpha", "2e-9", "t"});
    const auto c = resolve(s);
    CHECK(c.scenario.name == "exp1");
    CHECK(c.scenario.grid.counts[0] == 30);
    CHECK(c.scenario.grid.time_levels == 400);
    CHECK(c.scenario.params.alpha == 2e-9);
    CHECK(c.scenario.optimize.total_iterations() == 3);
    CHECK(c.scenario.optimize.step_at(0) == 1000.0);
    CHECK(c.snapshot_times == std::vector<double>{0.0, 0.005, 0.01});
    CHECK(c.scenario.u0.levels() == 400);
}

TEST_CASE("unknown keys and bad values name the key") {
    auto s = small_run("unused");
    s.push_back({"model.colour", "blue", "t"});
    try {
        (void)resolve(s);
        FAIL("no exception");
    } catch (const InvalidSpec& e) {
        CHECK(e.field() == "model.colour");
    }
    auto bad = small_run("unused");
    bad.push_back({"grid.Nt", "many", "t"});
    try {
        (void)resolve(bad);
        FAIL("no exception");
    } catch (const InvalidSpec& e) {
        CHECK(e.field() == "grid.Nt");
    }
    auto late = small_run("unused");
    late.push_back({"run.snapshots", "0.5", "t"});
    CHECK_THROWS_AS(resolve(late), InvalidSpec);
    CHECK_THROWS_AS(resolve({}), InvalidSpec);
}

TEST_CASE("every schema key is documented") {
    const auto& keys = known_keys();
    CHECK(keys.size() >= 30);
    for (const auto& [k, help] : keys) {
        CHECK(k.find('.') != std::string::npos);
        CHECK_FALSE(help.empty());
    }
}

TEST_CASE("numbers print in shortest round-trip form") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.0, 0.0}) CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("control.csv round trips exactly and replays the final state") {
    auto cfg = resolve(small_run("unused"));
    const Grid g(cfg.scenario.grid);
    BoundaryControl u(g);
    for (std::size_t n = 0; n < u.size(); ++n) u.values()[n] = 0.5 + 0.1 * std::sin(0.37 * n) / 3.0;
    const auto text = control_csv(u, g);
    CHECK(text.rfind("k,t,edge,i,x1,x2,u\n", 0) == 0);
    const auto back = parse_control_csv(text, g);
    CHECK(back == u);
    const auto a = solve_forward(cfg.scenario, u, cfg.scenario.params, g, StoragePolicy{StorageMode::final_only});
    const auto b = solve_forward(cfg.scenario, back, cfg.scenario.params, g, StoragePolicy{StorageMode::final_only});
    for (std::size_t n = 0; n < g.size(); ++n) CHECK(std::abs(a.final.ytilde[n] - b.final.ytilde[n]) <= 1e-12);
    CHECK_THROWS_AS(parse_control_csv("k,t\n", g), InvalidSpec);
    CHECK_THROWS_AS(parse_control_csv("k,t,edge,i,x1,x2,u\n0,0,left,0,0,,1\n", g), InvalidSpec);
}

TEST_CASE("2D control.csv names the edges") {
    const Grid g(testing::grid2d(4, 5, 3, 0.01, 1.0, 1.0));
    const auto text = control_csv(BoundaryControl(g, 2.0), g);
    for (const char* edge : {"bottom", "top", "left", "right"}) CHECK(text.find(edge) != std::string::npos);
    CHECK(parse_control_csv(text, g) == BoundaryControl(g, 2.0));
}

TEST_CASE("list shows twelve presets with grid sizes") {
    std::ostringstream out;
    CHECK(cmd_list(out) == exit_ok);
    std::istringstream in(out.str());
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) ++n;
    CHECK(n == 12);
    CHECK(out.str().find("60x100") != std::string::npos);
}

TEST_CASE("run writes every output with the documented headers") {
    const auto dir = scratch("run");
    auto cfg = resolve(small_run(dir));
    std::ostringstream out, err;
    REQUIRE(cmd_run(cfg, out, err) == exit_ok);
    CHECK(first_line(dir / "history.csv") == "iter,J,mismatch,reg,error_norm,grad_norm,phys_excess,wall_ms");
    CHECK(first_line(dir / "control.csv") == "k,t,edge,i,x1,x2,u");
    CHECK(first_line(dir / "final_state.csv") == "i,j,x1,x2,y,ytilde");
    CHECK(first_line(dir / "interface.csv") == "t,point_id,x1");
    CHECK(fs::exists(dir / "snapshot_0.csv"));
    CHECK(fs::exists(dir / "snapshot_200.csv"));
    CHECK(fs::exists(dir / "snapshot_399.csv"));

    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    for (const char* key : {"J", "mismatch", "regularization", "error_norm", "realistic", "max_phys_excess",
                            "wall_ms", "iterations"})
        CHECK(summary.contains(key));
    CHECK(summary["iterations"] == 3);
    CHECK(summary["status"] == "ok");

    // the exported control replays to the exported final state
    const Grid g(cfg.scenario.grid);
    const auto u = parse_control_csv(slurp(dir / "control.csv"), g);
    const auto fwd = solve_forward(cfg.scenario, u, cfg.scenario.params, g, StoragePolicy{StorageMode::final_only});
    CHECK(field_csv(fwd.final.y.values(), fwd.final.ytilde.values(), g) == slurp(dir / "final_state.csv"));
    fs::remove_all(dir);
}

TEST_CASE("zero iterations exports the uncontrolled solve") {
    const auto dir = scratch("zero");
    auto s = small_run(dir);
    s.push_back({"opt.iterations", "0", "t"});
    auto cfg = resolve(s);
    std::ostringstream out, err;
    REQUIRE(cmd_run(cfg, out, err) == exit_ok);
    const Grid g(cfg.scenario.grid);
    CHECK(parse_control_csv(slurp(dir / "control.csv"), g) == cfg.scenario.u0);
    fs::remove_all(dir);
}

TEST_CASE("a blow-up exits with its own code and keeps the history") {
    const auto dir = scratch("blowup");
    auto s = small_run(dir);
    s.push_back({"opt.step", "1e12", "t"});
    auto cfg = resolve(s);
    std::ostringstream out, err;
    CHECK(cmd_run(cfg, out, err) == exit_blow_up);
    CHECK(fs::exists(dir / "history.csv"));
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["status"] == "blow_up");
    fs::remove_all(dir);
}

TEST_CASE("gradcheck passes on a coarse 1D problem") {
    auto s = small_run("unused");
    s.push_back({"gradcheck.directions", "3", "t"});
    std::ostringstream out, err;
    CHECK(cmd_gradcheck(resolve(s), out, err) == exit_ok);
    CHECK(out.str().find("PASS") != std::string::npos);

    s.push_back({"gradcheck.threshold", "1e-300", "t"});
    std::ostringstream out2, err2;
    CHECK(cmd_gradcheck(resolve(s), out2, err2) == exit_gradcheck_failed);
}

TEST_CASE("self-target with alpha gives the analytic regularisation derivative") {
    auto s = small_run("unused");
    s.push_back({"scenario.self_target", "true", "t"});
    s.push_back({"model.alpha", "1e-3", "t"});
    s.push_back({"gradcheck.threshold", "1e-10", "t"});
    std::ostringstream out, err;
    CHECK(cmd_gradcheck(resolve(s), out, err) == exit_ok);
    CHECK(out.str().rfind("direction,adjoint,finite_diff,analytic,rel_error,status\n", 0) == 0);
}

TEST_CASE("the binary maps failures to exit codes") {
    CHECK(run_binary("list") == 0);
    CHECK(run_binary("run --scenario exp1 --override model.colour=blue") == exit_config_error);
    CHECK(run_binary("run --scenario nope") == exit_config_error);
    CHECK(run_binary("run --config /nonexistent/file.cfg") == exit_config_error);
}

}
