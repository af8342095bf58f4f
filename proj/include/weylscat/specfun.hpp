/**
 * @file specfun.hpp
 * @brief Bessel, Hankel and modified Bessel functions, and the 2D Green kernel
 *        of -Δ + z together with its two limits on the positive real axis.
 */
#pragma once

#include <complex>
#include <stdexcept>
#include <variant>
#include <vector>

namespace weylscat::specfun {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

enum class Branch { Plus, Minus };

/// Spectral parameter strictly off the cut (-inf, 0].
struct OffAxis {
    cd z;
};

/// Boundary value at z = -k^2. Minus is the outgoing limit, Plus the incoming one.
struct LimitBranch {
    double k;
    Branch branch;
};

using SpectralParameter = std::variant<OffAxis, LimitBranch>;

/// Throws DomainError if the parameter violates its invariants.
void validate(const SpectralParameter& s);

/// The value of z (for a limit branch this is -k^2).
cd spectral_z(const SpectralParameter& s);

/// The complex wavenumber w with Green kernel (1/2π)K0(w r). Re w > 0 off the
/// axis; w = -ik for Minus and w = ik for Plus.
cd kernel_wavenumber(const SpectralParameter& s);

double bessel_j(int n, double x);
double bessel_y(int n, double x);
cd hankel1(int n, double x);

double bessel_j_prime(int n, double x);
double bessel_y_prime(int n, double x);
cd hankel1_prime(int n, double x);

/// J_0..J_nmax and Y_0..Y_nmax at x in one pass. Output vectors are resized.
void bessel_jy(int nmax, double x, std::vector<double>& J, std::vector<double>& Y);

/// J_0, J_1, Y_0, Y_1 at x; the hot path of kernel assembly.
struct BesselJY01 {
    double j0, j1, y0, y1;
};
BesselJY01 bessel_jy01(double x);

/**
 * @brief Modified Bessel function of the second kind, order 0 or 1.
 *
 * Power series for |w| <= 2. Beyond the seam, Steed's continued fraction is
 * used up to |w| = 20 and the asymptotic expansion above that.
 */
cd mod_bessel_k(int order, cd w);

/// Modified Bessel function of the first kind, order 0 or 1, by power series.
cd mod_bessel_i(int order, cd w);

/// Green kernel of -Δ + z in the plane, evaluated at distance r > 0.
cd green_kernel(const SpectralParameter& s, double r);

/**
 * @brief Pieces of the Green kernel needed by the singular quadrature.
 *
 * g(r) = a0(r) ln r + smooth, with a0 entire in r^2. dg = g'(r).
 * a1 = a0'(r)/r, also entire in r^2.
 */
struct KernelParts {
    cd g;
    cd dg;
    cd a0;
    cd a1;
};
KernelParts kernel_parts(const SpectralParameter& s, double r);

/// lim_{r->0} [g(r) - a0(r) ln r] = -(ln(w/2) + γ)/(2π).
cd green_log_constant(const SpectralParameter& s);

}  // namespace weylscat::specfun
