/**
 * @file layerops.hpp
 * @brief Nyström matrices of the boundary layer operators and off-surface
 *        evaluation of layer potentials.
 *
 * Conventions. The single layer has kernel g(|x - y|); the double layer has
 * kernel ∂g(|x - y|)/∂ν(y). With ν the outward normal and one-sided traces
 * taken from outside (+) and inside (-):
 *
 *   γ0± SL φ = V φ,             γ1± SL φ = K' φ ∓ φ/2,
 *   γ0± DL ψ = K ψ ± ψ/2,       γ1± DL ψ = T ψ.
 *
 * V, K', K, T are the averaged traces. Matrices act on nodal density values.
 */
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "weylscat/geometry.hpp"
#include "weylscat/specfun.hpp"

namespace weylscat::layerops {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using geometry::BoundaryGrid;
using geometry::Vec2;
using specfun::SpectralParameter;

enum OperatorMask : unsigned { kV = 1u, kKp = 2u, kK = 4u, kT = 8u, kAll = 15u };

struct LayerOperatorSet {
    SpectralParameter s;
    Matrix V;   ///< γ0 SL
    Matrix Kp;  ///< γ1 SL
    Matrix K;   ///< γ0 DL
    Matrix T;   ///< γ1 DL
};

/// Logarithmic quadrature weight R(Δ) for 2m equispaced nodes:
/// ∫ ln(4 sin²((t - τ)/2)) f(τ) dτ ≈ Σ_j R(t - τ_j) f(τ_j).
double log_weight(double delta, int m);

/// Fourier differentiation matrix on n equispaced periodic nodes (n even).
Eigen::MatrixXd fourier_diff(int n);

/// Assembles the requested operators. T implies V.
LayerOperatorSet assemble(const SpectralParameter& s, const BoundaryGrid& grid, unsigned mask = kAll);

/// SL φ + DL ψ at the given points. Empty φ or ψ means zero.
/// Points closer to the curve than 3 max node spacings trigger a warning on
/// stderr (see set_warnings) and are still evaluated.
std::vector<cd> eval_potential(const SpectralParameter& s, const BoundaryGrid& grid, const Vector& phi,
                               const Vector& psi, const std::vector<Vec2>& points);

struct Gradient {
    cd dx;
    cd dy;
};
std::vector<Gradient> eval_gradient(const SpectralParameter& s, const BoundaryGrid& grid, const Vector& phi,
                                    const Vector& psi, const std::vector<Vec2>& points);

/// true where the point lies inside the exclusion band.
std::vector<bool> near_boundary(const BoundaryGrid& grid, const std::vector<Vec2>& points);

void set_warnings(bool enabled);

/// F(d) = ∫ e^{-ik d·y} [φ(y) - ik (d·ν(y)) ψ(y)] dσ(y).
std::vector<cd> far_field_row(double k, const BoundaryGrid& grid, const Vector& phi, const Vector& psi,
                              const std::vector<Vec2>& directions);

/// c(k) with SL φ + DL ψ ~ c(k) e^{ik|x|} |x|^{-1/2} F(x/|x|) for the outgoing kernel.
cd far_field_constant(double k);

}  // namespace weylscat::layerops
