#include <cmath>

#include "doctest.h"
#include "weylscat/weyl.hpp"

using namespace weylscat;
using namespace weylscat::weyl;
using specfun::cd;
using specfun::kPi;

namespace {

const specfun::LimitBranch kMinus{2.0, specfun::Branch::Minus};

double rel(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("coupling functions") {
    const Coupling c = 2.5;
    CHECK(c.is_constant());
    CHECK(c(1.0) == 2.5);
    const auto f = Coupling::function([](double t) { return std::cos(t); });
    CHECK_FALSE(f.is_constant());
    CHECK(f(0.0) == doctest::Approx(1.0));
    const auto tab = Coupling::tabulated({0.0, kPi}, {1.0, 3.0});
    CHECK(tab(kPi / 2) == doctest::Approx(2.0));
    CHECK(tab(3.0 * kPi / 2) == doctest::Approx(2.0));  // wraps to the first sample
    CHECK(tab(2.0 * kPi) == doctest::Approx(1.0));
    CHECK_THROWS(Coupling::tabulated({1.0, 0.5}, {1.0, 2.0}));
}

TEST_CASE("condition names") {
    CHECK(condition_name({Dirichlet{}}) == "dirichlet");
    CHECK(condition_name({DeltaPrime{1.0}}) == "delta_prime");
    CHECK(condition_name({Robin{1.0, 0.0}, geometry::ArcSpec{geometry::Circle{}, 0.0, 1.0}}) == "robin@arc");
}

TEST_CASE("invalid conditions are rejected") {
    const auto g = geometry::build_grid(geometry::Circle{1.0}, 16);
    CHECK_THROWS_AS(assemble_weyl({Robin{1.0, 1.0}}, kMinus, g), InvalidCondition);
    CHECK_THROWS_AS(assemble_weyl({Delta{std::nan("")}}, kMinus, g), InvalidCondition);
    const geometry::ArcSpec arc{geometry::Circle{1.0}, 0.0, kPi};
    const auto ag = geometry::build_arc_grid(arc, 16);
    CHECK_THROWS_AS(assemble_weyl({Robin{-1.0, 1.0}, arc}, kMinus, ag), InvalidCondition);
    CHECK_NOTHROW(assemble_weyl({Robin{1.0, -1.0}, arc}, kMinus, ag));
    // A grid that does not match the support.
    CHECK_THROWS_AS(assemble_weyl({Dirichlet{}, arc}, kMinus, g), InvalidCondition);
}

TEST_CASE("singular system errors carry the condition estimate") {
    const SingularSystemError e("singular", 3e-16);
    CHECK(e.rcond == 3e-16);
    CHECK(std::string(e.what()) == "singular");
}

TEST_CASE("layouts follow the condition") {
    const auto g = geometry::build_grid(geometry::Kite{}, 16);
    CHECK(assemble_weyl({Dirichlet{}}, kMinus, g).layout == Layout::SinglePhi);
    CHECK(assemble_weyl({Delta{1.0}}, kMinus, g).layout == Layout::SinglePhi);
    CHECK(assemble_weyl({Neumann{}}, kMinus, g).layout == Layout::SinglePsi);
    CHECK(assemble_weyl({DeltaPrime{1.0}}, kMinus, g).layout == Layout::SinglePsi);
    const auto r = assemble_weyl({Robin{0.5, -0.5}}, kMinus, g);
    CHECK(r.layout == Layout::TwoByTwo);
    CHECK(r.dim() == 2 * g.size());
}

TEST_CASE("Kreĭn form: symmetry, branch conjugation and the reference-point identity") {
    const auto g = geometry::build_grid(geometry::Kite{}, 32);
    Eigen::VectorXd w(g.size());
    for (int j = 0; j < g.size(); ++j) w[j] = g.w_edge[j] * g.jac[j];
    for (const Condition& c : std::vector<Condition>{Dirichlet{}, Neumann{}, Robin{1.0, -2.0}, Delta{3.0},
                                                     DeltaPrime{0.5}}) {
        const auto sys = assemble_weyl({c}, kMinus, g);
        const Matrix W = sys.krein_form();
        Eigen::VectorXd ww(W.rows());
        for (int b = 0; b < W.rows() / g.size(); ++b) ww.segment(b * g.size(), g.size()) = w;
        const Matrix S = ww.asDiagonal() * W;
        CHECK(rel(S, S.transpose()) <= 1e-10);
        const auto plus = assemble_weyl({c}, specfun::LimitBranch{2.0, specfun::Branch::Plus}, g);
        CHECK(rel(plus.A, sys.A.conjugate()) <= 1e-13);
        if (c.index() >= 2) {
            CHECK(rel(krein_matrix(sys, specfun::OffAxis{cd(0.5, 0.0)}), b_theta_matrix(sys)) <= 1e-12);
        }
    }
}

TEST_CASE("boundary conditions hold for the solved field") {
    const auto g = geometry::build_grid(geometry::Kite{}, 64);
    const auto tr = trace_plane_wave(2.0, {0.0, 1.0}, g);
    for (const Condition& c : std::vector<Condition>{Dirichlet{}, Neumann{}, Robin{1.0, -1.0}, Delta{2.0},
                                                     DeltaPrime{2.0}}) {
        const auto sys = assemble_weyl({c}, kMinus, g);
        const auto d = solve_weyl(sys, tr.g0, tr.g1);
        CHECK(boundary_residual(sys, tr.g0, tr.g1, d) <= 1e-10);
    }
}

TEST_CASE("zero coupling gives zero densities") {
    const auto g = geometry::build_grid(geometry::Circle{1.0}, 32);
    const auto tr = trace_plane_wave(2.0, {1.0, 0.0}, g);
    CHECK(solve_weyl(assemble_weyl({Delta{0.0}}, kMinus, g), tr.g0, tr.g1).phi.norm() == 0.0);
    CHECK(solve_weyl(assemble_weyl({DeltaPrime{0.0}}, kMinus, g), tr.g0, tr.g1).psi.norm() == 0.0);
    CHECK_THROWS(assemble_weyl({Delta{0.0}}, kMinus, g).krein_form());
}

TEST_CASE("strong coupling approaches the hard conditions") {
    const auto g = geometry::build_grid(geometry::Kite{}, 64);
    const auto tr = trace_plane_wave(2.0, {1.0, 0.0}, g);
    const auto dir = solve_weyl(assemble_weyl({Dirichlet{}}, kMinus, g), tr.g0, tr.g1);
    const auto del = solve_weyl(assemble_weyl({Delta{1e4}}, kMinus, g), tr.g0, tr.g1);
    CHECK(rel(del.phi, dir.phi) <= 1e-2);
}

TEST_CASE("plane-wave and point-source traces") {
    const auto g = geometry::build_grid(geometry::Circle{1.0}, 8);
    const auto pw = trace_plane_wave(3.0, {1.0, 0.0}, g);
    CHECK(std::abs(pw.g0[0] - std::exp(cd(0.0, 3.0))) <= 1e-15);
    CHECK(std::abs(pw.g1[0] - cd(0.0, 3.0) * std::exp(cd(0.0, 3.0))) <= 1e-14);
    const auto ps = trace_point_source(specfun::OffAxis{1.0}, {0.0, 0.0}, g);
    const cd g1 = specfun::green_kernel(specfun::OffAxis{1.0}, 1.0);
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(ps.g0[j] - g1) <= 1e-15);
}
