#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "pfcontrol/forward.hpp"
#include "pfcontrol/objective.hpp"
#include "pfcontrol/optimize.hpp"
#include "support.hpp"

using namespace pfc;
using namespace pfc::testing;

namespace {

ScenarioSpec small_exp1() { return reduced("exp1", 40, 800, 0.02); }

// The target becomes the final phase field reached under u, so the mismatch has a
// minimum of zero there and its derivative vanishes.
void self_target(ScenarioSpec& s, const BoundaryControl& u, const Grid& g) {
    const auto fwd = solve_forward(s, u, s.params, g, StoragePolicy{StorageMode::final_only});
    s.target = fwd.final.ytilde;
}

BoundaryControl random_direction(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    BoundaryControl s(g);
    for (double& v : s.values()) v = d(rng);
    return s;
}

OptimizeConfig fixed_steps(std::size_t n, double step) {
    OptimizeConfig c;
    c.schedule = {{n, step}};
    return c;
}

}  // namespace

TEST_SUITE("optimize") {

TEST_CASE("schedule lookup applies the scale and holds the last stage") {
    OptimizeConfig c;
    c.schedule = {{225, 1e16}, {25, 5e15}};
    c.step_scale = 1e-10;
    CHECK(c.total_iterations() == 250);
    CHECK(c.step_at(0) == 1e16 * 1e-10);
    CHECK(c.step_at(224) == 1e16 * 1e-10);
    CHECK(c.step_at(225) == 5e15 * 1e-10);
    CHECK(c.step_at(1000) == 5e15 * 1e-10);
    c.max_iterations = 10;
    CHECK(c.total_iterations() == 10);
}

TEST_CASE("self-target gives an identically zero gradient and stops at once") {
    auto s = small_exp1();
    const Grid g(s.grid);
    self_target(s, s.u0, g);
    const auto e = evaluate(s, s.u0, s.params, g);
    CHECK(e.report.J == 0.0);
    for (double v : e.gradient.values()) CHECK(v == 0.0);

    auto cfg = fixed_steps(10, 1.0);
    cfg.grad_norm_stop = 1e-30;
    const auto r = descend(s, s.params, g, cfg);
    CHECK(r.stopped_on_gradient);
    CHECK(r.iterations == 0);
    CHECK(r.u_opt == s.u0);
    CHECK(r.history.records.size() == 1);
}

TEST_CASE("descent with a modest fixed step lowers the cost") {
    auto s = small_exp1();
    const Grid g(s.grid);
    const auto r = descend(s, s.params, g, fixed_steps(5, 2000.0));
    REQUIRE_FALSE(r.failure);
    REQUIRE(r.history.records.size() == 6);
    CHECK(r.history.records.back().J < r.history.records.front().J);
    CHECK(r.iterations == 5);
    for (std::size_t n = 1; n < r.history.records.size(); ++n)
        CHECK(r.history.records[n].iter > r.history.records[n - 1].iter);
}

TEST_CASE("descent is bit-for-bit deterministic") {
    auto s = small_exp1();
    const Grid g(s.grid);
    const auto a = descend(s, s.params, g, fixed_steps(3, 2000.0));
    const auto b = descend(s, s.params, g, fixed_steps(3, 2000.0));
    CHECK(a.u_opt == b.u_opt);
    CHECK(a.final_report.J == b.final_report.J);
}

TEST_CASE("history cadence keeps the last record") {
    auto s = small_exp1();
    const Grid g(s.grid);
    auto cfg = fixed_steps(5, 100.0);
    cfg.history_every = 2;
    const auto r = descend(s, s.params, g, cfg);
    REQUIRE(r.history.records.size() == 4);
    CHECK(r.history.records[0].iter == 0);
    CHECK(r.history.records[1].iter == 2);
    CHECK(r.history.records[2].iter == 4);
    CHECK(r.history.records[3].iter == 5);
}

TEST_CASE("a blow-up keeps the history gathered so far") {
    auto s = small_exp1();
    const Grid g(s.grid);
    const auto r = descend(s, s.params, g, fixed_steps(5, 1e12));
    REQUIRE(r.failure.has_value());
    CHECK(r.history.records.size() >= 1);
    CHECK(r.failure->level() > 0);
}

TEST_CASE("adjoint directional derivatives match central differences") {
    auto s = small_exp1();
    const Grid g(s.grid);
    std::vector<BoundaryControl> dirs;
    for (unsigned seed = 1; seed <= 3; ++seed) dirs.push_back(random_direction(g, seed));
    for (double alpha : {0.0, 1e-8}) {
        ModelParams p = s.params;
        p.alpha = alpha;
        const auto rep = fd_gradient_check(s, p, g, s.u0, dirs, 1e-3);
        CHECK(rep.max_rel_error() <= 1e-3);
        for (const auto& d : rep.directions) CHECK_FALSE(d.truncation_dominated);
    }
}

TEST_CASE("with a self-target only the regularisation derivative remains") {
    auto s = small_exp1();
    const Grid g(s.grid);
    s.params.alpha = 1e-2;
    BoundaryControl u = s.u0;
    for (std::size_t n = 0; n < u.size(); ++n) u.values()[n] += 0.1 * std::sin(0.01 * n);
    self_target(s, u, g);
    const auto e = evaluate(s, u, s.params, g);
    const auto dir = random_direction(g, 7);
    const double analytic = s.params.alpha * boundary_quadrature(u, dir, g);
    CHECK(dot(e.gradient, dir) == doctest::Approx(analytic).epsilon(1e-10));
}

TEST_CASE("h = 1 is flagged as truncation dominated") {
    // the weakly coupled 1D model is nearly quadratic in u; the strongly coupled 2D
    // linear kind is not
    auto s = reduced("move2d-linear", 31, 2000, 0.081, 51);
    const Grid g(s.grid);
    const auto dir = random_direction(g, 3);
    CHECK(fd_gradient_check(s, s.params, g, s.u0, {dir}, 1.0).directions.front().truncation_dominated);
    CHECK_FALSE(fd_gradient_check(s, s.params, g, s.u0, {dir}, 1e-3).directions.front().truncation_dominated);
}

TEST_CASE("bad gradient check arguments are rejected") {
    auto s = small_exp1();
    const Grid g(s.grid);
    CHECK_THROWS_AS(fd_gradient_check(s, s.params, g, s.u0, {BoundaryControl(g)}, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(fd_gradient_check(s, s.params, g, s.u0, {random_direction(g, 1)}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(fd_gradient_check(s, s.params, g, s.u0, {BoundaryControl(3, 2, 1.0)}, 1e-3),
                    std::invalid_argument);
}

}
