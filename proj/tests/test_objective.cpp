#include <doctest.h>

#include <cmath>

#include "pfcontrol/adjoint.hpp"
#include "pfcontrol/errors.hpp"
#include "pfcontrol/forward.hpp"
#include "pfcontrol/objective.hpp"
#include "pfcontrol/optimize.hpp"
#include "support.hpp"

using namespace pfc;
using namespace pfc::testing;

TEST_SUITE("objective") {

TEST_CASE("1D quadrature of ones sums the analytic weights") {
    const Grid g(grid1d(10, 101, 1.0));
    const BoundaryControl one(g, 1.0);
    double expected = 0.0;
    for (std::size_t k = 0; k < g.time_levels(); ++k) expected += 2.0 * g.dt();
    CHECK(boundary_quadrature(one, one, g) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(boundary_quadrature(one, one, g) == doctest::Approx(2.0 + 2.0 * g.dt()).epsilon(1e-12));
    CHECK(boundary_quadrature(BoundaryControl(g, 0.0), one, g) == 0.0);
}

TEST_CASE("2D quadrature weights edges by their spacing") {
    const Grid g(grid2d(5, 7, 11, 0.1, 2.0, 3.0));
    const BoundaryControl one(g, 1.0);
    // edges running along x1 carry N1-2 points of width dx1, edges along x2 carry N2-2 of width dx2
    const double per_level = 2.0 * (5 - 2) * g.dx1() + 2.0 * (7 - 2) * g.dx2();
    CHECK(boundary_quadrature(one, one, g) == doctest::Approx(11 * g.dt() * per_level).epsilon(1e-13));
    double w = 0.0;
    for (std::size_t b = 0; b < g.boundary_size(); ++b) w += boundary_weight(g, b);
    CHECK(w == doctest::Approx(g.dt() * per_level).epsilon(1e-13));
}

TEST_CASE("quadrature is bilinear") {
    const Grid g(grid2d(6, 6, 5, 0.01, 1.0, 1.0));
    BoundaryControl f(g), s(g);
    for (std::size_t n = 0; n < f.size(); ++n) {
        f.values()[n] = std::sin(0.3 * n);
        s.values()[n] = std::cos(0.7 * n);
    }
    BoundaryControl f3 = f;
    for (double& v : f3.values()) v *= 3.0;
    CHECK(boundary_quadrature(f3, s, g) == doctest::Approx(3.0 * boundary_quadrature(f, s, g)).epsilon(1e-13));
    CHECK(boundary_quadrature(f, s, g) == doctest::Approx(boundary_quadrature(s, f, g)).epsilon(1e-14));
}

TEST_CASE("quadrature rejects mismatched shapes") {
    const Grid g(grid1d(10, 20, 1.0));
    CHECK_THROWS_AS(boundary_quadrature(BoundaryControl(3, 2), BoundaryControl(g), g), ShapeMismatch);
}

TEST_CASE("cost of a perfect match with zero control is zero") {
    const Grid g(grid1d(12, 20, 1.0));
    const Field t(g, 0.3);
    const auto r = cost(t, t, BoundaryControl(g), table1(), g);
    CHECK(r.J == 0.0);
    CHECK(r.error_norm == 0.0);
}

TEST_CASE("unit mismatch on the unit interval costs one half") {
    const Grid g(grid1d(37, 20, 1.0));
    const auto r = cost(Field(g, 1.0), Field(g, 0.0), BoundaryControl(g), table1(), g);
    CHECK(r.mismatch == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(r.regularization == 0.0);
    CHECK(r.error_norm == doctest::Approx(std::sqrt(37.0)).epsilon(1e-14));
}

TEST_CASE("unit mismatch on a 2D rectangle costs half its area") {
    const Grid g(grid2d(9, 13, 5, 0.01, 0.6, 1.0));
    const auto r = cost(Field(g, 1.0), Field(g, 0.0), BoundaryControl(g), table6(ReactionKind::limiter), g);
    CHECK(r.mismatch == doctest::Approx(0.3).epsilon(1e-13));
}

TEST_CASE("regularisation is alpha/2 times the quadrature of u squared") {
    const Grid g(grid1d(10, 11, 1.0));
    ModelParams p = table1();
    p.alpha = 4.0;
    const auto r = cost(Field(g), Field(g), BoundaryControl(g, 0.5), p, g);
    CHECK(r.regularization == doctest::Approx(2.0 * 0.25 * 2.0 * 11 * g.dt()).epsilon(1e-13));
    CHECK(r.J == r.mismatch + r.regularization);
}

TEST_CASE("gradient formula") {
    const Grid g(grid1d(10, 30, 0.3));
    ModelParams p = table1();
    const FluxTrace zero(g, 0.0);
    CHECK(norm(gradient(zero, BoundaryControl(g, 1.0), p, g)) == 0.0);

    p.alpha = 2.0;
    const auto gr = gradient(zero, BoundaryControl(g, 1.0), p, g);
    for (double v : gr.values()) CHECK(v == doctest::Approx(2.0 * g.dt()).epsilon(1e-15));

    p.alpha = 0.0;
    FluxTrace flux(g, 0.0);
    flux.at(4, 1) = 3.0;
    const auto gf = gradient(flux, BoundaryControl(g, 7.0), p, g);
    CHECK(gf.at(4, 1) == doctest::Approx(-3.0 * g.dt()).epsilon(1e-15));
    CHECK(gf.at(4, 0) == 0.0);
}

TEST_CASE("gradient is jointly linear in flux and control") {
    const Grid g(grid2d(5, 6, 8, 0.01, 1.0, 1.0));
    ModelParams p = table6(ReactionKind::linear);
    p.alpha = 0.3;
    BoundaryControl u(g), f(g);
    for (std::size_t n = 0; n < u.size(); ++n) {
        u.values()[n] = 0.1 * n;
        f.values()[n] = std::sin(1.0 * n);
    }
    const auto g1 = gradient(f, u, p, g);
    for (std::size_t k = 0; k < g.time_levels(); ++k)
        for (std::size_t b = 0; b < g.boundary_size(); ++b)
            CHECK(g1.at(k, b) == doctest::Approx((0.3 * u.at(k, b) - f.at(k, b)) * g.dt() *
                                                  g.boundary()[b].measure)
                                     .epsilon(1e-14));
}

TEST_CASE("melting target pushes boundary temperatures upward") {
    // exp1-like: a solid seed grows from the left; asking for an all-liquid end state
    // must make the gradient negative so that descent raises u.
    auto s = reduced("exp1", 40, 800, 0.02);
    const Grid g(s.grid);
    s.target = Field(g, 0.0);
    const auto e = evaluate(s, s.u0, s.params, g);
    // the left point sits next to the seed; the last two levels carry no flux
    const std::size_t nt = g.time_levels();
    for (std::size_t k = 0; k + 2 < nt; ++k) CHECK(e.gradient.at(k, 0) < 0.0);
    CHECK(e.gradient.at(nt - 1, 0) == 0.0);
    double total = 0.0;
    for (double v : e.gradient.values()) total += v;
    CHECK(total < 0.0);
}

TEST_CASE("a small step along the negative gradient decreases the cost") {
    auto s = reduced("exp1", 40, 800, 0.02);
    const Grid g(s.grid);
    const auto e = evaluate(s, s.u0, s.params, g);
    REQUIRE(norm(e.gradient) > 0.0);
    double eps = 1.0 / norm(e.gradient);
    bool decreased = false;
    for (int halving = 0; halving < 20 && !decreased; ++halving, eps *= 0.5) {
        BoundaryControl u = s.u0;
        axpy(u, -eps, e.gradient);
        decreased = reduced_cost(s, u, s.params, g).J < e.report.J;
    }
    CHECK(decreased);
}

TEST_CASE("mismatch is symmetric under swapping axes of a square problem") {
    const Grid g(grid2d(9, 9, 5, 0.01, 1.0, 1.0));
    Field a(g), b(g), ta(g), tb(g);
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j) {
            a.at(i, j) = b.at(j, i) = 0.01 * (i * i) + 0.1 * j;
            ta.at(i, j) = tb.at(j, i) = std::sin(0.2 * i) * 0.5;
        }
    const ModelParams p = table6(ReactionKind::linear);
    // equal up to the summation order
    CHECK(cost(a, ta, BoundaryControl(g), p, g).mismatch ==
          doctest::Approx(cost(b, tb, BoundaryControl(g), p, g).mismatch).epsilon(1e-15));
}

}
