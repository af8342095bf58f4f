#include <cmath>

#include "doctest.h"
#include "weylscat/oracle.hpp"
#include "weylscat/parallel.hpp"
#include "weylscat/scattering.hpp"

using namespace weylscat;
using namespace weylscat::scattering;
using specfun::cd;
using specfun::kPi;

namespace {

double rel(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff(); }

double reciprocity(const Matrix& s, const DirectionGrid& d) {
    double r = 0.0;
    for (int a = 0; a < d.M; ++a) {
        for (int b = 0; b < d.M; ++b) r = std::max(r, std::abs(s(a, b) - s(d.opposite(b), d.opposite(a))));
    }
    return r;
}

}  // namespace

TEST_CASE("direction grid") {
    const DirectionGrid d(8);
    CHECK(d.weight() == doctest::Approx(kPi / 4));
    CHECK(d.opposite(1) == 5);
    CHECK(d.theta[2] == doctest::Approx(kPi / 2));
    CHECK_THROWS(DirectionGrid(0));
    CHECK_THROWS(DirectionGrid(5).opposite(0));
}

TEST_CASE("Dirichlet circle amplitude against the partial-wave oracle") {
    const auto g = geometry::build_grid(geometry::Circle{1.0}, 128);
    const DirectionGrid d(32);
    const auto ff = scattering_amplitude({weyl::Dirichlet{}}, 2.0, g, d);
    const auto oracle_s = oracle::mie_farfield(oracle::mie_coefficients({weyl::Dirichlet{}}, 2.0, 1.0, 40), 32);
    CHECK(rel(ff.s, oracle_s) <= 1e-8);
    CHECK(ff.condition == "dirichlet");
    CHECK(ff.convention == std::string(kConvention));
}

TEST_CASE("zero coupling gives the identity S-matrix") {
    const auto g = geometry::build_grid(geometry::Kite{}, 32);
    const DirectionGrid d(16);
    const auto ff = scattering_amplitude({weyl::DeltaPrime{0.0}}, 1.0, g, d);
    CHECK(ff.s.norm() == 0.0);
    const auto S = s_matrix(ff, d);
    CHECK((S.S - Matrix::Identity(16, 16)).norm() == 0.0);
    CHECK(S.unitarity_residual() == 0.0);
}

TEST_CASE("kite: unitarity at two direction counts, reciprocity, optical theorem") {
    const auto g = geometry::build_grid(geometry::Kite{}, 96);
    for (int M : {64, 128}) {
        const DirectionGrid d(M);
        const auto ff = scattering_amplitude({weyl::Robin{1.0, -1.0}}, 1.5, g, d);
        CHECK(s_matrix(ff, d).unitarity_residual() <= 1e-6);
        CHECK(reciprocity(ff.s, d) <= 1e-6);
        for (int m = 0; m < M; m += 17) {
            CHECK(std::abs(cross_section(ff, d, m) - 2.0 * ff.s(m, m).real()) <= 1e-6);
        }
    }
}

TEST_CASE("dual pairing and plus branch") {
    const auto g = geometry::build_grid(geometry::Kite{}, 64);
    const DirectionGrid d(32);
    const weyl::BoundaryCondition bc{weyl::Delta{1.5}};
    const auto a = scattering_amplitude(bc, 2.0, g, d);
    const auto b = scattering_amplitude_dual(bc, 2.0, g, d);
    CHECK((a.s - b.s).cwiseAbs().maxCoeff() <= 1e-8);
    const auto p = scattering_amplitude(bc, 2.0, g, d, specfun::Branch::Plus);
    CHECK((p.s + a.s.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("phase-flip mutation is caught by the oracle and reciprocity checks") {
    const DirectionGrid d(32);
    const auto circle = geometry::build_grid(geometry::Circle{1.0}, 64);
    const auto kite = geometry::build_grid(geometry::Kite{}, 64);
    const auto oracle_s = oracle::mie_farfield(oracle::mie_coefficients({weyl::Neumann{}}, 2.0, 1.0, 40), 32);
    testing::set_farfield_phase_flip(true);
    const double oracle_err = rel(scattering_amplitude({weyl::Neumann{}}, 2.0, circle, d).s, oracle_s);
    const double recip = reciprocity(scattering_amplitude({weyl::Neumann{}}, 2.0, kite, d).s, d);
    testing::set_farfield_phase_flip(false);
    CHECK(oracle_err > 1e-2);
    CHECK(recip > 1e-2);
    CHECK(rel(scattering_amplitude({weyl::Neumann{}}, 2.0, circle, d).s, oracle_s) <= 1e-8);
}

TEST_CASE("generalized eigenfunction: plane wave for zero coupling, masking") {
    const auto g = geometry::build_grid(geometry::Circle{1.0}, 32);
    const geometry::Vec2 inc{0.6, 0.8};
    const std::vector<geometry::Vec2> pts = {{2.0, 1.0}, {1.0 + 1e-3, 0.0}, {0.2, -0.3}};
    const auto f = generalized_eigenfunction({weyl::Delta{0.0}}, 2.0, g, inc, pts);
    for (std::size_t p = 0; p < pts.size(); ++p) {
        CHECK(std::abs(f.values[p] - std::exp(cd(0.0, 2.0 * dot(inc, pts[p])))) == 0.0);
    }
    CHECK_FALSE(f.masked[0]);
    CHECK(f.masked[1]);
    CHECK_FALSE(f.masked[2]);
    CHECK_THROWS(generalized_eigenfunction(
        weyl::assemble_weyl({weyl::Dirichlet{}}, specfun::LimitBranch{2.0, specfun::Branch::Plus}, g), inc, pts));
}

TEST_CASE("resolvent kernel") {
    const auto g = geometry::build_grid(geometry::Circle{1.0}, 64);
    const geometry::Vec2 x{2.0, 0.5};
    const geometry::Vec2 y{-1.2, 1.6};
    const specfun::OffAxis z{cd(1.0, 0.0)};
    CHECK(resolvent_kernel({weyl::Delta{0.0}}, z, g, x, y) == specfun::green_kernel(z, norm(x - y)));
    const cd a = resolvent_kernel({weyl::Robin{2.0, -1.0}}, z, g, x, y);
    const cd b = resolvent_kernel({weyl::Robin{2.0, -1.0}}, z, g, y, x);
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
    CHECK_THROWS(resolvent_kernel({weyl::Dirichlet{}}, z, g, x, x));
}

TEST_CASE("thread count does not change results") {
    const auto g = geometry::build_grid(geometry::Kite{}, 64);
    const DirectionGrid d(16);
    set_thread_count(1);
    const auto a = scattering_amplitude({weyl::Robin{1.0, -1.0}}, 2.0, g, d);
    set_thread_count(3);
    const auto b = scattering_amplitude({weyl::Robin{1.0, -1.0}}, 2.0, g, d);
    set_thread_count(1);
    CHECK((a.s - b.s).cwiseAbs().maxCoeff() <= 1e-13);
}
