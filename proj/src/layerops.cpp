#include "weylscat/layerops.hpp"

#include <atomic>
#include <cmath>
#include <iostream>

#include "weylscat/parallel.hpp"

namespace weylscat::layerops {

namespace {

constexpr double kPi = specfun::kPi;
std::atomic<bool> g_warnings{true};

}  // namespace

double log_weight(double delta, int m) {
    double r = 0.0;
    for (int q = 1; q < m; ++q) r += std::cos(q * delta) / q;
    return -(2.0 * kPi / m) * r - (kPi / (static_cast<double>(m) * m)) * std::cos(m * delta);
}

Eigen::MatrixXd fourier_diff(int n) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    const double h = 2.0 * kPi / n;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            const int d = a - b;
            const double sg = (d % 2 == 0) ? 1.0 : -1.0;
            D(a, b) = 0.5 * sg / std::tan(0.5 * d * h);
        }
    }
    return D;
}

LayerOperatorSet assemble(const SpectralParameter& s, const BoundaryGrid& g, unsigned mask) {
    specfun::validate(s);
    if (g.size() < 16) throw geometry::GeometryError("assemble: grid below minimum size");
    if (mask & kT) mask |= kV;
    const int n = g.size();
    const bool arc = g.kind == geometry::GridKind::Arc;
    const double h = g.h();
    // Closed grids carry 2N nodes; the even extension of an arc carries 2n.
    const int m = arc ? n : n / 2;
    const int period = 2 * m;
    std::vector<double> rtab(period);
    for (int q = 0; q < period; ++q) rtab[q] = log_weight(q * h, m);
    std::vector<double> meas(n);
    for (int j = 0; j < n; ++j) meas[j] = arc ? g.jac[j] * g.dt_dsigma[j] : g.jac[j];
    const cd c0 = specfun::green_log_constant(s);
    const double p0 = -1.0 / (2.0 * kPi);

    LayerOperatorSet out{s, {}, {}, {}, {}};
    const bool wantV = mask & kV;
    const bool wantK = mask & kK;
    const bool wantKp = mask & kKp;
    if (wantV) out.V.resize(n, n);
    if (wantK) out.K.resize(n, n);
    if (wantKp) out.Kp.resize(n, n);

    parallel_for(0, n, [&](int i) {
        for (int j = 0; j < n; ++j) {
            double rw;  // log weight (sum of both images on arcs)
            if (arc) {
                rw = rtab[((i - j) % period + period) % period] + rtab[(i + j + 1) % period];
            } else {
                rw = rtab[((i - j) % period + period) % period];
            }
            if (i == j) {
                if (wantV) {
                    const double e = arc ? std::log(g.jac[i] * (g.t1 - g.t0) / 4.0) : std::log(g.jac[i]);
                    const cd smooth = c0 + p0 * e;
                    out.V(i, j) = (0.5 * p0 * rw + h * smooth) * meas[j];
                }
                const cd dk = -g.kappa[i] / (4.0 * kPi);
                if (wantK) out.K(i, j) = h * dk * meas[j];
                if (wantKp) out.Kp(i, j) = h * dk * meas[j];
                continue;
            }
            const Vec2 d = g.x[i] - g.x[j];
            const double r = norm(d);
            const auto kp = specfun::kernel_parts(s, r);
            double lg;
            if (arc) {
                const double a = std::sin(0.5 * (g.sigma[i] - g.sigma[j]));
                const double b = std::sin(0.5 * (g.sigma[i] + g.sigma[j]));
                lg = std::log(4.0 * a * a) + std::log(4.0 * b * b);
            } else {
                const double a = std::sin(0.5 * (g.t[i] - g.t[j]));
                lg = std::log(4.0 * a * a);
            }
            if (wantV) {
                const cd P = kp.a0;
                out.V(i, j) = (0.5 * P * rw + h * (kp.g - 0.5 * P * lg)) * meas[j];
            }
            if (wantK) {
                const double dn = dot(d, g.normal[j]);
                const cd val = -kp.dg * dn / r;
                const cd P = -dn * kp.a1;
                out.K(i, j) = (0.5 * P * rw + h * (val - 0.5 * P * lg)) * meas[j];
            }
            if (wantKp) {
                const double dn = dot(d, g.normal[i]);
                const cd val = kp.dg * dn / r;
                const cd P = dn * kp.a1;
                out.Kp(i, j) = (0.5 * P * rw + h * (val - 0.5 * P * lg)) * meas[j];
            }
        }
    });

    if (mask & kT) {
        // Maue: T ψ = d/ds V (dψ/ds) - z ν_x·V(ν_y ψ).
        Matrix Vt = out.V;
        for (int j = 0; j < n; ++j) Vt.col(j) /= meas[j];
        Matrix Din;
        Matrix Dout;
        if (arc) {
            const Eigen::MatrixXd full = fourier_diff(2 * n);
            Eigen::MatrixXd de(n, n);
            Eigen::MatrixXd dodd(n, n);
            for (int i = 0; i < n; ++i) {
                for (int l = 0; l < n; ++l) {
                    de(i, l) = full(i, l) + full(i, 2 * n - 1 - l);
                    dodd(i, l) = full(i, l) - full(i, 2 * n - 1 - l);
                }
            }
            Din = dodd.cast<cd>();
            Dout = de.cast<cd>();
        } else {
            Din = fourier_diff(n).cast<cd>();
            Dout = Din;
        }
        Matrix T = Dout * (Vt * Din);
        for (int i = 0; i < n; ++i) T.row(i) /= meas[i];
        const cd mz = -specfun::spectral_z(s);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                T(i, j) += mz * dot(g.normal[i], g.normal[j]) * out.V(i, j);
            }
        }
        out.T = std::move(T);
    }
    return out;
}

void set_warnings(bool enabled) { g_warnings.store(enabled); }

std::vector<bool> near_boundary(const BoundaryGrid& grid, const std::vector<Vec2>& points) {
    const double band = 3.0 * grid.max_spacing();
    std::vector<bool> out(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        out[p] = geometry::distance_to_nodes(grid, points[p]) < band;
    }
    return out;
}

namespace {

void warn_near(const BoundaryGrid& grid, const std::vector<Vec2>& points) {
    if (!g_warnings.load()) return;
    const auto flags = near_boundary(grid, points);
    std::size_t count = 0;
    for (bool f : flags) count += f ? 1 : 0;
    if (count > 0) {
        std::cerr << "warning: " << count << " evaluation point(s) inside the near-boundary band; "
                  << "plain quadrature is inaccurate there\n";
    }
}

}  // namespace

std::vector<cd> eval_potential(const SpectralParameter& s, const BoundaryGrid& grid, const Vector& phi,
                               const Vector& psi, const std::vector<Vec2>& points) {
    specfun::validate(s);
    warn_near(grid, points);
    const int n = grid.size();
    const bool has_phi = phi.size() == n;
    const bool has_psi = psi.size() == n;
    std::vector<cd> out(points.size(), cd(0.0));
    parallel_for(0, static_cast<int>(points.size()), [&](int p) {
        cd acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const Vec2 d = points[p] - grid.x[j];
            const double r = norm(d);
            const double wt = grid.w_edge[j] * grid.jac[j];
            if (has_phi) acc += wt * specfun::green_kernel(s, r) * phi[j];
            if (has_psi) {
                const auto kp = specfun::kernel_parts(s, r);
                acc += wt * (-kp.dg * dot(d, grid.normal[j]) / r) * psi[j];
            }
        }
        out[p] = acc;
    });
    return out;
}

std::vector<Gradient> eval_gradient(const SpectralParameter& s, const BoundaryGrid& grid, const Vector& phi,
                                    const Vector& psi, const std::vector<Vec2>& points) {
    specfun::validate(s);
    warn_near(grid, points);
    const int n = grid.size();
    const bool has_phi = phi.size() == n;
    const bool has_psi = psi.size() == n;
    const cd z = specfun::spectral_z(s);
    std::vector<Gradient> out(points.size());
    parallel_for(0, static_cast<int>(points.size()), [&](int p) {
        cd gx = 0.0;
        cd gy = 0.0;
        for (int j = 0; j < n; ++j) {
            const Vec2 d = points[p] - grid.x[j];
            const double r = norm(d);
            const double wt = grid.w_edge[j] * grid.jac[j];
            const auto kp = specfun::kernel_parts(s, r);
            if (has_phi) {
                const cd c = wt * kp.dg / r * phi[j];
                gx += c * d.x;
                gy += c * d.y;
            }
            if (has_psi) {
                const Vec2 nu = grid.normal[j];
                const double dn = dot(d, nu);
                const cd g2 = z * kp.g - kp.dg / r;  // g''(r)
                const cd a = -(g2 * dn / (r * r) - kp.dg * dn / (r * r * r));
                const cd b = -kp.dg / r;
                gx += wt * (a * d.x + b * nu.x) * psi[j];
                gy += wt * (a * d.y + b * nu.y) * psi[j];
            }
        }
        out[p] = {gx, gy};
    });
    return out;
}

std::vector<cd> far_field_row(double k, const BoundaryGrid& grid, const Vector& phi, const Vector& psi,
                              const std::vector<Vec2>& directions) {
    if (!(k > 0.0)) throw specfun::DomainError("far_field_row: k must be positive");
    const int n = grid.size();
    const bool has_phi = phi.size() == n;
    const bool has_psi = psi.size() == n;
    std::vector<cd> out(directions.size(), cd(0.0));
    for (std::size_t m = 0; m < directions.size(); ++m) {
        const Vec2 dir = directions[m];
        cd acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const double wt = grid.w_edge[j] * grid.jac[j];
            const cd e = std::exp(cd(0.0, -k * dot(dir, grid.x[j])));
            cd dens = 0.0;
            if (has_phi) dens += phi[j];
            if (has_psi) dens += cd(0.0, -k * dot(dir, grid.normal[j])) * psi[j];
            acc += wt * e * dens;
        }
        out[m] = acc;
    }
    return out;
}

cd far_field_constant(double k) {
    return cd(0.0, 0.25) * std::sqrt(2.0 / (kPi * k)) * std::exp(cd(0.0, -kPi / 4.0));
}

}  // namespace weylscat::layerops
