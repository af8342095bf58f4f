/**
 * @file weyl.hpp
 * @brief Boundary-condition catalog and the linear systems that produce the
 *        jump densities of a scattered field.
 *
 * Every field is written u = u_inc + SL φ + DL ψ, where φ = -[γ1]u and
 * ψ = [γ0]u are jumps across the curve (exterior minus interior). A
 * WeylSystem maps the plane-wave (or point-source) traces g0 = γ0 u_inc,
 * g1 = γ1 u_inc to (φ, ψ).
 *
 * Conditions, with ± the exterior/interior side:
 *   Dirichlet   γ0± u = 0                      φ only
 *   Neumann     γ1± u = 0                      ψ only
 *   Robin       γ1± u = b± γ0± u               φ and ψ
 *   Delta       α γ0 u = [γ1] u, [γ0] u = 0    φ only
 *   DeltaPrime  β γ1 u = [γ0] u, [γ1] u = 0    ψ only
 *
 * On an arc support the same conditions hold on the arc only and the
 * densities vanish off it.
 */
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "weylscat/geometry.hpp"
#include "weylscat/layerops.hpp"
#include "weylscat/specfun.hpp"

namespace weylscat::weyl {

using cd = std::complex<double>;
using layerops::Matrix;
using layerops::Vector;
using geometry::BoundaryGrid;
using specfun::SpectralParameter;

struct SingularSystemError : std::runtime_error {
    SingularSystemError(const std::string& what, double rcond)
        : std::runtime_error(what), rcond(rcond) {}
    double rcond;
};

struct InvalidCondition : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A real coupling function of the curve parameter t.
class Coupling {
public:
    Coupling() = default;
    Coupling(double value);  // NOLINT: implicit by design, constants are the common case

    static Coupling function(std::function<double(double)> f);
    /// Periodic piecewise-linear interpolation of (t, value) samples, t ascending in [0, 2π).
    static Coupling tabulated(std::vector<double> t, std::vector<double> values);

    double operator()(double t) const;
    bool is_constant() const { return !fn_; }
    double constant() const { return value_; }

private:
    double value_ = 0.0;
    std::function<double(double)> fn_;
};

struct Dirichlet {};
struct Neumann {};
struct Robin {
    Coupling b_minus;
    Coupling b_plus;
};
struct Delta {
    Coupling alpha;
};
struct DeltaPrime {
    Coupling beta;
};
using Condition = std::variant<Dirichlet, Neumann, Robin, Delta, DeltaPrime>;

struct FullCurve {};
using Support = std::variant<FullCurve, geometry::ArcSpec>;

struct BoundaryCondition {
    Condition condition;
    Support support = FullCurve{};
};

std::string condition_name(const BoundaryCondition& bc);

/// Grid matching the support: the closed grid of `curve` or the arc grid.
BoundaryGrid support_grid(const geometry::ClosedCurve& curve, const BoundaryCondition& bc, int N);

enum class Layout { SinglePhi, SinglePsi, TwoByTwo };

struct Densities {
    Vector phi;  ///< empty when the layout has no φ block
    Vector psi;  ///< empty when the layout has no ψ block
};

/// Several right-hand sides at once; column c holds one problem.
struct DensityBlock {
    Matrix phi;
    Matrix psi;
};

/**
 * @brief Assembled and factorized system for one condition and spectral parameter.
 *
 * `A` is the factorized matrix. For Dirichlet, Neumann and Robin it equals the
 * Kreĭn-form matrix W. For Delta it is I + diag(α)V and for DeltaPrime it is
 * I - diag(β)T; the right-hand side is scaled accordingly. Immutable after
 * construction, so concurrent solves are safe.
 */
class WeylSystem {
public:
    BoundaryCondition bc;
    SpectralParameter s;
    Layout layout = Layout::SinglePhi;
    BoundaryGrid grid;
    layerops::LayerOperatorSet ops;
    Matrix A;
    double rcond = 0.0;

    /// Sampled coupling values at the nodes (α, β, or b-, b+ as applicable).
    std::vector<double> c1;
    std::vector<double> c2;

    int n() const { return grid.size(); }
    int dim() const { return layout == Layout::TwoByTwo ? 2 * n() : n(); }

    DensityBlock solve(const Matrix& g0, const Matrix& g1) const;

    /// The matrix of Θ + Π M Π' in unscaled form. Throws for Delta or
    /// DeltaPrime with a vanishing coupling, where it does not exist.
    Matrix krein_form() const;

private:
    Eigen::PartialPivLU<Matrix> lu_;
    friend WeylSystem assemble_weyl(const BoundaryCondition&, const SpectralParameter&, const BoundaryGrid&);
};

/// Threshold below which the reciprocal condition estimate counts as singular.
inline constexpr double kSingularRcond = 1e-14;

WeylSystem assemble_weyl(const BoundaryCondition& bc, const SpectralParameter& s, const BoundaryGrid& grid);

struct Traces {
    Vector g0;
    Vector g1;
};

/// γ0 and γ1 of e^{ik d·x} at the grid nodes.
Traces trace_plane_wave(double k, geometry::Vec2 incident, const BoundaryGrid& grid);

/// Traces of g(|x - y0|) at the grid nodes, with g the kernel of s.
Traces trace_point_source(const SpectralParameter& s, geometry::Vec2 y0, const BoundaryGrid& grid);

Densities solve_weyl(const WeylSystem& system, const Vector& g0, const Vector& g1);

/// Max relative residual of the boundary condition for the total field with
/// the given incident traces and solved densities, using the one-sided traces
/// of the assembled operators.
double boundary_residual(const WeylSystem& system, const Vector& g0, const Vector& g1, const Densities& d);

/// Θ + Π M_z Π' with M_z = γ(G_{z0} - G_z) and Θ taken at the reference point z0.
Matrix krein_matrix(const WeylSystem& system, const SpectralParameter& z0);

/// B_Θ - Π γ G_z Π' for conditions with bounded B_Θ (Robin, Delta, DeltaPrime).
Matrix b_theta_matrix(const WeylSystem& system);

}  // namespace weylscat::weyl
