#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "weylscat/geometry.hpp"
#include "weylscat/specfun.hpp"

using namespace weylscat::geometry;
using weylscat::specfun::kPi;

TEST_CASE("closed grid lengths") {
    CHECK(std::abs(build_grid(Circle{2.5}, 8).length() - 5.0 * kPi) <= 1e-13);
    // Ellipse perimeter for a = 2, b = 1 (complete elliptic integral).
    CHECK(std::abs(build_grid(Ellipse{2.0, 1.0}, 64).length() - 9.688448220547675) <= 1e-12);
}

TEST_CASE("divergence theorem on closed grids") {
    // The integral of x·ν over the curve is twice the enclosed area.
    for (const ClosedCurve& c : {ClosedCurve{Circle{1.5}}, ClosedCurve{Ellipse{2.0, 0.5}}, ClosedCurve{Kite{}}}) {
        const auto g = build_grid(c, 64);
        const auto f = build_grid(c, 128);
        auto flux = [](const BoundaryGrid& grid) {
            double s = 0.0;
            for (int j = 0; j < grid.size(); ++j) s += grid.w[j] * grid.jac[j] * dot(grid.x[j], grid.normal[j]);
            return s;
        };
        CHECK(std::abs(flux(g) - flux(f)) <= 1e-12);
    }
    CHECK(std::abs([] {
        const auto g = build_grid(Ellipse{2.0, 0.5}, 32);
        double s = 0.0;
        for (int j = 0; j < g.size(); ++j) s += g.w[j] * g.jac[j] * dot(g.x[j], g.normal[j]);
        return s;
    }() - 2.0 * kPi * 2.0 * 0.5) <= 1e-12);
}

TEST_CASE("normals are outward unit vectors") {
    const auto g = build_grid(Kite{}, 32);
    for (int j = 0; j < g.size(); ++j) {
        CHECK(std::abs(norm(g.normal[j]) - 1.0) <= 1e-14);
    }
    const auto c = build_grid(Circle{1.0}, 16);
    for (int j = 0; j < c.size(); ++j) CHECK(dot(c.normal[j], c.x[j]) == doctest::Approx(1.0));
}

TEST_CASE("circle curvature") {
    const auto g = build_grid(Circle{4.0}, 8);
    for (double k : g.kappa) CHECK(k == doctest::Approx(0.25));
}

TEST_CASE("arc grid on a half circle") {
    const ArcSpec arc{Circle{1.0}, 0.0, kPi};
    const auto g = build_arc_grid(arc, 16);
    CHECK(g.kind == GridKind::Arc);
    CHECK(g.size() == 32);
    CHECK(std::abs(g.length() - kPi) <= 1e-10);
    for (int j = 0; j < g.size(); ++j) {
        CHECK(g.t[j] > 0.0);
        CHECK(g.t[j] < kPi);
    }
    // Nodes cluster towards the end points.
    CHECK(g.t[1] - g.t[0] < g.t[16] - g.t[15]);
    // Third-order convergence of the arc length or better.
    const double e1 = std::abs(build_arc_grid({Ellipse{2.0, 1.0}, 0.3, 2.0}, 8).length() -
                               build_arc_grid({Ellipse{2.0, 1.0}, 0.3, 2.0}, 256).length());
    const double e2 = std::abs(build_arc_grid({Ellipse{2.0, 1.0}, 0.3, 2.0}, 16).length() -
                               build_arc_grid({Ellipse{2.0, 1.0}, 0.3, 2.0}, 256).length());
    CHECK((e2 < 1e-12 || e1 / e2 >= 8.0));
}

TEST_CASE("tabulated curves") {
    const char* path = "weylscat_test_curve.txt";
    {
        std::ofstream out(path);
        out << "# degenerate: x stays at 0.5\n0.5 0 0 0\n0 0 0 1\n";
        out.close();
    }
    CHECK_THROWS_AS(validate(load_tabulated(path)), GeometryError);
    {
        std::ofstream out(path);
        out << "0.5 0 0 0\n1 0 0 1   # cos t, sin t\n";
    }
    const auto curve = load_tabulated(path);
    CHECK_NOTHROW(validate(curve));
    const auto g = build_grid(curve, 16);
    CHECK(std::abs(g.length() - 2.0 * kPi) <= 1e-13);
    CHECK(g.x[0].x == doctest::Approx(1.5));
    std::remove(path);
    CHECK_THROWS(load_tabulated("no/such/file.txt"));
}

TEST_CASE("invalid curves are rejected") {
    CHECK_THROWS_AS(validate(Circle{0.0}), GeometryError);
    CHECK_THROWS_AS(validate(Ellipse{1.0, -1.0}), GeometryError);
    CHECK_THROWS_AS(validate(TabulatedSmooth{{{0, 0, 0, 0}, {1, 0, 0, -1}}}), GeometryError);  // clockwise
}

TEST_CASE("distance to nodes") {
    const auto g = build_grid(Circle{1.0}, 64);
    CHECK(distance_to_nodes(g, {3.0, 0.0}) == doctest::Approx(2.0));
}
