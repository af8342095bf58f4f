#include <cmath>

#include "doctest.h"
#include "weylscat/oracle.hpp"

using namespace weylscat;
using specfun::cd;

namespace {

void check_coefficients(const oracle::MieCoefficients& mc, const std::vector<cd>& want) {
    for (std::size_t n = 0; n < want.size(); ++n) CHECK(std::abs(mc.c[n] - want[n]) <= 1e-13);
}

}  // namespace

// Coefficients below were computed with an arbitrary-precision library from
// the mode-matching conditions and rounded to 17 digits.
TEST_CASE("partial-wave coefficients at k = 2 on the unit circle") {
    check_coefficients(oracle::mie_coefficients({weyl::Dirichlet{}}, 2.0, 1.0, 32),
                       {{-0.16138248963449243, 0.36788338053500782},
                        {-0.96670437276587662, -0.17940743697296854},
                        {-0.24618477031684108, -0.43078745244132318},
                        {-0.012903430231113625, -0.11285801575158234}});
    check_coefficients(oracle::mie_coefficients({weyl::Neumann{}}, 2.0, 1.0, 32),
                       {{-0.96670437276587662, -0.17940743697296854},
                        {-0.012903430231113625, -0.11285801575158234},
                        {-0.16138248963449243, 0.36788338053500782}});
    check_coefficients(oracle::mie_coefficients({weyl::Delta{2.0}}, 2.0, 1.0, 32),
                       {{-0.056918955275892246, -0.23168769455064553},
                        {-0.43374371150018389, -0.49559066197238738},
                        {-0.05115638678590122, -0.22031661507229202}});
}

TEST_CASE("symbol identities") {
    for (double k : {0.5, 2.0, 5.0}) {
        const auto sym = oracle::circle_symbols(k, 1.3, oracle::default_n_max(k, 1.3));
        CHECK(oracle::calderon_residual(sym) <= 1e-10);
        for (int n = 0; n <= sym.n_max; ++n) {
            CHECK(std::abs(sym.Kp_ext[n] - sym.Kp_int[n] + 1.0) <= 1e-12);
            CHECK(std::abs(sym.K_ext[n] - sym.K_int[n] - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("mode matching and symbol coefficients agree, on both branches") {
    const auto sym = oracle::circle_symbols(2.0, 1.0, 40);
    for (const weyl::Condition& c : std::vector<weyl::Condition>{weyl::Dirichlet{}, weyl::Neumann{},
                                                                 weyl::Robin{1.0, -1.0}, weyl::Delta{2.0},
                                                                 weyl::DeltaPrime{2.0}}) {
        const auto mm = oracle::mie_coefficients({c}, 2.0, 1.0, 40);
        const auto sc = oracle::symbol_coefficients({c}, sym);
        const auto sp = oracle::symbol_coefficients({c}, sym, true);
        for (int n = 0; n <= 40; ++n) {
            CHECK(std::abs(mm.c[n] - sc.c[n]) <= 1e-12);
            CHECK(std::abs(sp.c[n] - sc.c[n]) <= 1e-10);
            // Energy conservation per partial wave.
            CHECK(std::abs(std::abs(1.0 + 2.0 * mm.c[n]) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("coefficients decay past the truncation order") {
    const auto mc = oracle::mie_coefficients({weyl::Dirichlet{}}, 5.0, 1.0, oracle::default_n_max(5.0, 1.0));
    CHECK(mc.tail <= 1e-15);
}

TEST_CASE("oracle far field is circulant and vanishes for zero coupling") {
    const auto s = oracle::mie_farfield(oracle::mie_coefficients({weyl::Robin{0.3, -0.7}}, 1.0, 1.0, 32), 16);
    for (int a = 0; a < 16; ++a) {
        for (int b = 0; b < 16; ++b) CHECK(std::abs(s(a, b) - s((a + 3) % 16, (b + 3) % 16)) <= 1e-14);
    }
    CHECK(oracle::mie_farfield(oracle::mie_coefficients({weyl::Delta{0.0}}, 1.0, 1.0, 32), 8).norm() <= 1e-13);
}

TEST_CASE("non-constant or arc conditions are outside the oracle") {
    CHECK_THROWS(oracle::mie_coefficients({weyl::Delta{weyl::Coupling::function([](double t) { return t; })}}, 1.0,
                                          1.0, 16));
    CHECK_THROWS(oracle::mie_coefficients({weyl::Dirichlet{}, geometry::ArcSpec{geometry::Circle{}, 0.0, 1.0}}, 1.0,
                                          1.0, 16));
}

TEST_CASE("brute-force collocation on a single Fourier mode") {
    // The Dirichlet system is -Vφ = g0; on a single Fourier mode the solve
    // divides by the symbol of V.
    const int N = 16;
    const auto sym = oracle::circle_symbols(1.0, 1.0, 32);
    const auto g = geometry::build_grid(geometry::Circle{1.0}, N);
    oracle::Vector g0(g.size());
    oracle::Vector g1 = oracle::Vector::Zero(g.size());
    for (int j = 0; j < g.size(); ++j) g0[j] = std::exp(cd(0.0, 2.0 * g.t[j]));
    const auto bf = oracle::brute_force_weyl(geometry::Circle{1.0}, {weyl::Dirichlet{}},
                                             specfun::LimitBranch{1.0, specfun::Branch::Minus}, N, g0, g1);
    CHECK((bf.V * g0 - sym.V[2] * g0).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((bf.densities.phi + g0 / sym.V[2]).cwiseAbs().maxCoeff() <= 1e-8 * g0.cwiseAbs().maxCoeff() / std::abs(sym.V[2]));
}
