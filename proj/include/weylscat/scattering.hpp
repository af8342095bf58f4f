/**
 * @file scattering.hpp
 * @brief Scattering amplitude, on-shell scattering matrix, generalized
 *        eigenfunctions and the perturbed resolvent kernel.
 *
 * Amplitude convention. For incidence ξ' and observation ξ,
 *
 *   s[ξ, ξ'] = -(i/4π) Σ_j w_j |x'_j| conj(Πγ u°_ξ)(x_j) · ρ_ξ'(x_j),
 *
 * where ρ_ξ' = (φ, ψ) solves the outgoing (Minus) system for the traces of
 * u°_ξ' = e^{ik ξ'·x}. Rows index observation directions, columns index
 * incident directions. With this sign S = I - s·diag(2π/M) is unitary and
 * the scattered field behaves like
 *
 *   u⁺ - u° ~ -π √(2/(πk)) e^{-iπ/4} e^{ik|x|} |x|^{-1/2} s[x/|x|, ξ'].
 *
 * On the unit circle a Dirichlet obstacle
 * gives s[ξ, ξ'] = -(1/π) Σ_n c_n e^{in(θ - θ')}, c_n = -J_n(k)/H_n(k).
 */
#pragma once

#include <string>
#include <vector>

#include "weylscat/weyl.hpp"

namespace weylscat::scattering {

using cd = std::complex<double>;
using geometry::BoundaryGrid;
using geometry::Vec2;
using layerops::Matrix;
using layerops::Vector;
using weyl::BoundaryCondition;

/// Human-readable record of the amplitude convention; also written to manifests.
extern const char* const kConvention;

struct DirectionGrid {
    explicit DirectionGrid(int M);
    int M;
    std::vector<double> theta;
    std::vector<Vec2> dir;
    double weight() const;
    /// Index of -ξ_m (requires even M).
    int opposite(int m) const;
};

struct FarField {
    double k = 0.0;
    std::string condition;
    specfun::Branch branch = specfun::Branch::Minus;
    Matrix s;  ///< s(out, in)
    std::string convention = kConvention;
    double rcond = 0.0;
};

/// One Weyl solve per incident direction against a shared factorization.
FarField scattering_amplitude(const BoundaryCondition& bc, double k, const BoundaryGrid& grid,
                              const DirectionGrid& dirs, specfun::Branch branch = specfun::Branch::Minus);

/// Same amplitude assembled from an existing system (must be a limit branch).
FarField scattering_amplitude(const weyl::WeylSystem& system, const DirectionGrid& dirs);

/// The second form: -(i/4π) Σ w conj(ρ⁺_out) γ u°_in with ρ⁺ from the Plus system.
FarField scattering_amplitude_dual(const BoundaryCondition& bc, double k, const BoundaryGrid& grid,
                                   const DirectionGrid& dirs);

struct SMatrix {
    Matrix S;
    /// ‖S S† - I‖₂.
    double unitarity_residual() const;
};

SMatrix s_matrix(const FarField& ff, const DirectionGrid& dirs);

/// Σ_m (2π/M) |s(ξ_m, ξ_in)|².
double cross_section(const FarField& ff, const DirectionGrid& dirs, int incident);

struct EigenfunctionField {
    double k = 0.0;
    Vec2 incident;
    std::vector<Vec2> points;
    std::vector<cd> values;
    std::vector<bool> masked;  ///< inside the near-boundary exclusion band
    weyl::Densities densities;
    Vector g0;
    Vector g1;
    double boundary_residual = 0.0;
};

/// u⁺ = e^{ik ξ·x} + SL⁻φ + DL⁻ψ with (φ, ψ) from the outgoing system.
EigenfunctionField generalized_eigenfunction(const BoundaryCondition& bc, double k, const BoundaryGrid& grid,
                                             Vec2 incident, const std::vector<Vec2>& points);

/// Same, reusing an already factorized Minus-branch system.
EigenfunctionField generalized_eigenfunction(const weyl::WeylSystem& system, Vec2 incident,
                                             const std::vector<Vec2>& points);

/// Kernel of the perturbed resolvent at (x, y0): free kernel plus the layer
/// correction driven by the traces of the free kernel centered at y0.
cd resolvent_kernel(const BoundaryCondition& bc, const specfun::SpectralParameter& s, const BoundaryGrid& grid,
                    Vec2 x, Vec2 y0);

cd resolvent_kernel(const weyl::WeylSystem& system, Vec2 x, Vec2 y0);

namespace testing {
/// Mutation hook for negative tests: when set, the observation traces use the
/// reversed direction, which breaks the far-field phase. Off by default.
void set_farfield_phase_flip(bool on);
}  // namespace testing

}  // namespace weylscat::scattering
