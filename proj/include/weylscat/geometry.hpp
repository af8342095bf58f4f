/**
 * @file geometry.hpp
 * @brief Closed parametrized curves, arcs on them, and quadrature grids.
 */
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace weylscat::geometry {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

struct GeometryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Circle {
    double R = 1.0;
};
struct Ellipse {
    double a = 1.0;
    double b = 1.0;
};
/// x(t) = (cos t + 0.65 cos 2t - 0.65, 1.5 sin t)
struct Kite {};
/**
 * Fourier-tabulated curve. Row m holds (a_m, b_m, c_m, d_m) with
 * x(t) = Σ a_m cos mt + b_m sin mt, y(t) = Σ c_m cos mt + d_m sin mt, m = 0, 1, ...
 */
struct TabulatedSmooth {
    std::vector<std::array<double, 4>> modes;
};

using ClosedCurve = std::variant<Circle, Ellipse, Kite, TabulatedSmooth>;

/// Reads one mode per line, four whitespace-separated reals. '#' starts a comment.
TabulatedSmooth load_tabulated(const std::string& path);

struct CurvePoint {
    Vec2 x;
    Vec2 dx;
    Vec2 ddx;
};

CurvePoint evaluate(const ClosedCurve& c, double t);

/// Throws GeometryError for a non-positive size parameter, a vanishing
/// derivative on a 4096-point sample, or clockwise orientation.
void validate(const ClosedCurve& c);

struct ArcSpec {
    ClosedCurve parent;
    double t0 = 0.0;
    double t1 = 0.0;
};

enum class GridKind { Closed, Arc };

/**
 * Quadrature grid on a curve or arc.
 *
 * On closed grids the nodes are t_j = πj/N, j < 2N. On arcs with 2N nodes,
 * σ_j = (j + 1/2)π/(2N) and t_j = t0 + (t1 - t0)(1 - cos σ_j)/2.
 *
 * w integrates smooth functions: Σ w_j jac_j f_j ≈ ∫ f dσ. On arcs it is
 * Fejér's first rule. w_edge is the midpoint rule in σ, exact in the limit
 * for integrands with inverse square-root edge behavior; the Nyström
 * operators use it. On closed grids both coincide.
 */
struct BoundaryGrid {
    GridKind kind = GridKind::Closed;
    int half_n = 0;  ///< the N of the constructor; size() == 2N
    std::vector<double> t;
    std::vector<Vec2> x;
    std::vector<Vec2> normal;
    std::vector<double> jac;  ///< |x'(t_j)|
    std::vector<double> w;
    std::vector<double> w_edge;
    std::vector<double> kappa;
    // Arc only.
    std::vector<double> sigma;
    std::vector<double> dt_dsigma;
    double t0 = 0.0;
    double t1 = 0.0;

    int size() const { return static_cast<int>(t.size()); }
    /// Parameter spacing: π/N on closed grids, π/(2N) in σ on arcs.
    double h() const;
    double length() const;
    double max_spacing() const;
};

BoundaryGrid build_grid(const ClosedCurve& c, int N);
BoundaryGrid build_arc_grid(const ArcSpec& arc, int N);

/// Shortest distance from p to the grid nodes.
double distance_to_nodes(const BoundaryGrid& g, Vec2 p);

}  // namespace weylscat::geometry
