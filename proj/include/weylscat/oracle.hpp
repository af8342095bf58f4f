/**
 * @file oracle.hpp
 * @brief Independent reference values: Fourier symbols of the layer operators
 *        on a circle, partial-wave scattering coefficients, and a brute-force
 *        collocation solver built on adaptive quadrature.
 *
 * Nothing here calls the Nyström assembly in layerops.
 */
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "weylscat/geometry.hpp"
#include "weylscat/specfun.hpp"
#include "weylscat/weyl.hpp"

namespace weylscat::oracle {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/**
 * @brief Outgoing symbols of the layer operators on a circle of radius R.
 *
 * Entry n (0 <= n <= n_max) is the eigenvalue on e^{inθ}; mode -n has the
 * same value. One-sided traces are computed from the interior and exterior
 * mode expansions separately; the averaged K and K' are their means.
 */
struct CircleSymbols {
    double k = 0.0;
    double R = 0.0;
    int n_max = 0;
    std::vector<cd> V;
    std::vector<cd> T;
    std::vector<cd> Kp_ext;  ///< γ1+ SL
    std::vector<cd> Kp_int;  ///< γ1- SL
    std::vector<cd> K_ext;   ///< γ0+ DL
    std::vector<cd> K_int;   ///< γ0- DL
    std::vector<cd> Kp;
    std::vector<cd> K;

    cd at(const std::vector<cd>& sym, int n) const { return sym[n < 0 ? -n : n]; }
};

CircleSymbols circle_symbols(double k, double R, int n_max);

/// Max over modes of |σ(V)σ(T) - σ(K)σ(K') + 1/4|.
double calderon_residual(const CircleSymbols& s);

/// n_max = max(32, ceil(2kR) + 16).
int default_n_max(double k, double R);

struct MieCoefficients {
    double k = 0.0;
    double R = 0.0;
    std::vector<cd> c;   ///< c_n for n = 0..n_max (c_{-n} = c_n)
    double tail = 0.0;   ///< |c_{n_max}|, the truncation monitor
};

/// Exterior coefficients of u = Σ (J_n + c_n H_n) e^{in(θ-θ')}, from mode
/// matching of the boundary condition on the circle. Constant parameters only.
MieCoefficients mie_coefficients(const weyl::BoundaryCondition& bc, double k, double R, int n_max);

/// Same coefficients from the symbols: c_n = (iπR/2) vᵀ W_n⁻¹ v with
/// v = Π(J_n, k J_n'). `plus_branch` solves with the conjugate symbols and
/// returns the conjugate of the result's dual pairing.
MieCoefficients symbol_coefficients(const weyl::BoundaryCondition& bc, const CircleSymbols& sym,
                                    bool plus_branch = false);

/// s[out, in] = -(1/π) Σ_n c_n e^{in(θ_out - θ_in)} on M uniform directions.
Matrix mie_farfield(const MieCoefficients& mc, int M);

struct BruteForce {
    Matrix V;
    Matrix K;
    Matrix Kp;
    Matrix T;
    weyl::Densities densities;
};

/**
 * @brief Collocation with the trigonometric Lagrange basis on 2N uniform
 *        nodes, every matrix entry integrated by adaptive Gauss-Kronrod.
 *
 * Closed curves only, N <= 32. The hypersingular operator uses the same
 * tangential-derivative rewrite as the production code, with the inner
 * derivative taken analytically on the basis functions.
 */
BruteForce brute_force_weyl(const geometry::ClosedCurve& curve, const weyl::BoundaryCondition& bc,
                            const specfun::SpectralParameter& s, int N, const Vector& g0, const Vector& g1);

}  // namespace weylscat::oracle
