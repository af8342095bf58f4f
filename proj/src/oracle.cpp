#include "weylscat/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace weylscat::oracle {

namespace {

constexpr double kPi = specfun::kPi;
const cd kI(0.0, 1.0);

using specfun::bessel_j;
using specfun::bessel_j_prime;
using specfun::hankel1;
using specfun::hankel1_prime;

void require_circle_constants(const weyl::BoundaryCondition& bc) {
    if (!std::holds_alternative<weyl::FullCurve>(bc.support)) {
        throw weyl::InvalidCondition("circle oracle: full-curve support only");
    }
    auto check = [](const weyl::Coupling& c) {
        if (!c.is_constant()) throw weyl::InvalidCondition("circle oracle: constant parameters only");
    };
    if (const auto* r = std::get_if<weyl::Robin>(&bc.condition)) {
        check(r->b_minus);
        check(r->b_plus);
    } else if (const auto* d = std::get_if<weyl::Delta>(&bc.condition)) {
        check(d->alpha);
    } else if (const auto* dp = std::get_if<weyl::DeltaPrime>(&bc.condition)) {
        check(dp->beta);
    }
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

using Integrand = std::function<void(double, Vector&)>;

void gk15(const Integrand& f, double a, double b, int dim, Vector& kron, double& err, Vector& tmp) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    Vector gauss = Vector::Zero(dim);
    kron.setZero(dim);
    f(c, tmp);
    kron += kWgk[7] * tmp;
    gauss += kWg[3] * tmp;
    for (int j = 0; j < 7; ++j) {
        for (int sgn = -1; sgn <= 1; sgn += 2) {
            f(c + sgn * h * kXgk[j], tmp);
            kron += kWgk[j] * tmp;
            if (j % 2 == 1) gauss += kWg[j / 2] * tmp;
        }
    }
    kron *= h;
    gauss *= h;
    err = (kron - gauss).cwiseAbs().maxCoeff();
}

Vector adaptive(const Integrand& f, double a, double b, int dim, double tol) {
    struct Panel {
        double a;
        double b;
        int depth;
    };
    Vector total = Vector::Zero(dim);
    Vector kron(dim);
    Vector tmp(dim);
    std::vector<Panel> stack{{a, b, 0}};
    const double len = b - a;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        double err = 0.0;
        gk15(f, p.a, p.b, dim, kron, err, tmp);
        // Panels narrower than 1e-9 carry at most ~1e-8 of a log-singular
        // integrand and are accepted as they are.
        const double local_tol = std::max(tol * (p.b - p.a) / len, 1e-14);
        if (err <= local_tol || p.b - p.a < 1e-9 || p.depth >= 60) {
            total += kron;
        } else {
            const double m = 0.5 * (p.a + p.b);
            stack.push_back({p.a, m, p.depth + 1});
            stack.push_back({m, p.b, p.depth + 1});
        }
    }
    return total;
}

}  // namespace

int default_n_max(double k, double R) { return std::max(32, static_cast<int>(std::ceil(2.0 * k * R)) + 16); }

CircleSymbols circle_symbols(double k, double R, int n_max) {
    if (!(k > 0.0) || !(R > 0.0) || n_max < 1) throw specfun::DomainError("circle_symbols: bad arguments");
    CircleSymbols s;
    s.k = k;
    s.R = R;
    s.n_max = n_max;
    const double x = k * R;
    const double base = 0.5 * kPi * R;
    for (int n = 0; n <= n_max; ++n) {
        const double J = bessel_j(n, x);
        const double Jp = bessel_j_prime(n, x);
        const cd H = hankel1(n, x);
        const cd Hp = hankel1_prime(n, x);
        // Single layer: (iπR/2) J_n(k r<) H_n(k r>); double layer: k ∂/∂R of the source factor.
        s.V.push_back(kI * base * J * H);
        s.Kp_int.push_back(kI * base * k * Jp * H);
        s.Kp_ext.push_back(kI * base * k * J * Hp);
        s.K_int.push_back(kI * base * k * J * Hp);
        s.K_ext.push_back(kI * base * k * Jp * H);
        s.T.push_back(kI * base * k * k * Jp * Hp);
        s.Kp.push_back(0.5 * (s.Kp_int.back() + s.Kp_ext.back()));
        s.K.push_back(0.5 * (s.K_int.back() + s.K_ext.back()));
    }
    return s;
}

double calderon_residual(const CircleSymbols& s) {
    double r = 0.0;
    for (int n = 0; n <= s.n_max; ++n) r = std::max(r, std::abs(s.V[n] * s.T[n] - s.K[n] * s.Kp[n] + 0.25));
    return r;
}

MieCoefficients mie_coefficients(const weyl::BoundaryCondition& bc, double k, double R, int n_max) {
    require_circle_constants(bc);
    MieCoefficients mc;
    mc.k = k;
    mc.R = R;
    const double x = k * R;
    for (int n = 0; n <= n_max; ++n) {
        const double J = bessel_j(n, x);
        const double Jp = k * bessel_j_prime(n, x);
        const cd H = hankel1(n, x);
        const cd Hp = k * hankel1_prime(n, x);
        cd c;
        switch (bc.condition.index()) {
            case 0:
                c = -J / H;
                break;
            case 1:
                c = -Jp / Hp;
                break;
            case 2: {
                // Exterior condition γ1 u = b+ γ0 u decouples from the interior field.
                const double bp = std::get<weyl::Robin>(bc.condition).b_plus.constant();
                c = -(Jp - bp * J) / (Hp - bp * H);
                break;
            }
            case 3: {
                // Unknowns (c, d), interior field d J_n: continuity and α γ0 u = [γ1] u.
                const double a = std::get<weyl::Delta>(bc.condition).alpha.constant();
                Eigen::Matrix2cd M;
                M << H, -J, Hp - a * H, -Jp;
                Eigen::Vector2cd rhs(-J, -(Jp - a * J));
                c = M.fullPivLu().solve(rhs)[0];
                break;
            }
            case 4: {
                // Continuity of γ1 u and β γ1 u = [γ0] u.
                const double b = std::get<weyl::DeltaPrime>(bc.condition).beta.constant();
                Eigen::Matrix2cd M;
                M << Hp, -Jp, H, -(J + b * Jp);
                Eigen::Vector2cd rhs(-Jp, -J);
                c = M.fullPivLu().solve(rhs)[0];
                break;
            }
        }
        mc.c.push_back(c);
    }
    mc.tail = std::abs(mc.c.back());
    return mc;
}

MieCoefficients symbol_coefficients(const weyl::BoundaryCondition& bc, const CircleSymbols& sym, bool plus_branch) {
    require_circle_constants(bc);
    MieCoefficients mc;
    mc.k = sym.k;
    mc.R = sym.R;
    const double x = sym.k * sym.R;
    auto br = [&](cd v) { return plus_branch ? std::conj(v) : v; };
    for (int n = 0; n <= sym.n_max; ++n) {
        const double J = bessel_j(n, x);
        const double Jp = sym.k * bessel_j_prime(n, x);
        const cd V = br(sym.V[n]);
        const cd K = br(sym.K[n]);
        const cd Kp = br(sym.Kp[n]);
        const cd T = br(sym.T[n]);
        cd pairing;
        switch (bc.condition.index()) {
            case 0:
                pairing = J * J / (-V);
                break;
            case 1:
                pairing = Jp * Jp / (-T);
                break;
            case 2: {
                const auto& r = std::get<weyl::Robin>(bc.condition);
                const double bm = r.b_minus.constant();
                const double bp = r.b_plus.constant();
                const double jump = bp - bm;
                const double avg = 0.5 * (bp + bm);
                Eigen::Matrix2cd W;
                W << -(1.0 / jump + V), -(avg / jump + K), -(avg / jump + Kp), -(bp * bm / jump + T);
                const Eigen::Vector2cd v(J, Jp);
                const Eigen::Vector2cd rho = W.fullPivLu().solve(v);
                pairing = plus_branch ? rho.dot(v) : cd(v.transpose() * rho);
                break;
            }
            case 3: {
                const double a = std::get<weyl::Delta>(bc.condition).alpha.constant();
                pairing = -a * J * J / (1.0 + a * V);
                break;
            }
            case 4: {
                const double b = std::get<weyl::DeltaPrime>(bc.condition).beta.constant();
                pairing = b * Jp * Jp / (1.0 - b * T);
                break;
            }
        }
        if (plus_branch && bc.condition.index() != 2) pairing = std::conj(pairing);
        mc.c.push_back(kI * (0.5 * kPi * sym.R) * pairing);
    }
    mc.tail = std::abs(mc.c.back());
    return mc;
}

Matrix mie_farfield(const MieCoefficients& mc, int M) {
    if (M <= 0) throw std::invalid_argument("mie_farfield: M must be positive");
    // Circulant: s depends only on the angle difference.
    std::vector<cd> row(M);
    for (int d = 0; d < M; ++d) {
        const double delta = 2.0 * kPi * d / M;
        cd acc = mc.c[0];
        for (std::size_t n = 1; n < mc.c.size(); ++n) acc += 2.0 * mc.c[n] * std::cos(n * delta);
        row[d] = -acc / kPi;
    }
    Matrix s(M, M);
    for (int a = 0; a < M; ++a) {
        for (int b = 0; b < M; ++b) s(a, b) = row[((a - b) % M + M) % M];
    }
    return s;
}

BruteForce brute_force_weyl(const geometry::ClosedCurve& curve, const weyl::BoundaryCondition& bc,
                            const specfun::SpectralParameter& s, int N, const Vector& g0, const Vector& g1) {
    if (N < 4 || N > 32) throw std::invalid_argument("brute_force_weyl: 4 <= N <= 32");
    if (!std::holds_alternative<weyl::FullCurve>(bc.support)) {
        throw weyl::InvalidCondition("brute_force_weyl: closed curves only");
    }
    specfun::validate(s);
    const int n = 2 * N;
    if (g0.size() != n || g1.size() != n) throw std::invalid_argument("brute_force_weyl: trace size mismatch");
    const double h = kPi / N;
    std::vector<geometry::Vec2> x(n);
    std::vector<geometry::Vec2> nu(n);
    std::vector<double> speed(n);
    for (int i = 0; i < n; ++i) {
        const auto p = geometry::evaluate(curve, i * h);
        x[i] = p.x;
        speed[i] = norm(p.dx);
        nu[i] = {p.dx.y / speed[i], -p.dx.x / speed[i]};
    }
    const cd z = specfun::spectral_z(s);

    // Lagrange basis values and derivatives at τ for all 2N nodes.
    auto basis = [&](double tau, std::vector<double>& L, std::vector<double>& dL) {
        for (int j = 0; j < n; ++j) {
            const double u = tau - j * h;
            const double cu = std::cos(u);
            const double su = std::sin(u);
            double cm = 1.0;
            double sm = 0.0;
            double l = 1.0;
            double dl = 0.0;
            for (int m = 1; m <= N; ++m) {
                const double c_next = cm * cu - sm * su;
                sm = sm * cu + cm * su;
                cm = c_next;
                const double wgt = (m < N) ? 2.0 : 1.0;
                l += wgt * cm;
                dl += wgt * m * sm;
            }
            L[j] = l / n;
            dL[j] = -dl / n;
        }
    };

    BruteForce out;
    out.V.resize(n, n);
    out.K.resize(n, n);
    out.Kp.resize(n, n);
    Matrix U(n, n);
    Matrix Nn(n, n);
    for (int i = 0; i < n; ++i) {
        const double ti = i * h;
        // The double-layer kernels are bounded but lose all digits to
        // cancellation as r -> 0; inside a small window they are replaced by
        // the mean of two samples at ±kWindow, accurate to O(kWindow²).
        constexpr double kWindow = 1e-3;
        auto dl_kernels = [&, i](double tau, cd& kk, cd& kkp) {
            const auto p = geometry::evaluate(curve, tau);
            const double sp = norm(p.dx);
            const geometry::Vec2 ny{p.dx.y / sp, -p.dx.x / sp};
            const auto d = x[i] - p.x;
            const double r = norm(d);
            const auto kp = specfun::kernel_parts(s, r);
            kk = -kp.dg * dot(d, ny) / r;
            kkp = kp.dg * dot(d, nu[i]) / r;
        };
        cd kk_lo, kkp_lo, kk_hi, kkp_hi;
        dl_kernels(ti - kWindow, kk_lo, kkp_lo);
        dl_kernels(ti + kWindow, kk_hi, kkp_hi);
        const cd kk_mid = 0.5 * (kk_lo + kk_hi);
        const cd kkp_mid = 0.5 * (kkp_lo + kkp_hi);
        Integrand f = [&, i](double tau, Vector& v) {
            thread_local std::vector<double> L;
            thread_local std::vector<double> dL;
            L.resize(n);
            dL.resize(n);
            basis(tau, L, dL);
            const auto p = geometry::evaluate(curve, tau);
            const double sp = norm(p.dx);
            const geometry::Vec2 ny{p.dx.y / sp, -p.dx.x / sp};
            const auto d = x[i] - p.x;
            const double r = norm(d);
            v.resize(5 * n);
            if (r == 0.0) {
                v.setZero();
                return;
            }
            const auto kp = specfun::kernel_parts(s, r);
            const cd kv = kp.g * sp;
            const double off = std::remainder(tau - ti, 2.0 * kPi);
            const bool near = std::abs(off) < kWindow;
            const cd kk = (near ? kk_mid : -kp.dg * dot(d, ny) / r) * sp;
            const cd kkp = (near ? kkp_mid : kp.dg * dot(d, nu[i]) / r) * sp;
            const cd kn = kp.g * dot(nu[i], ny) * sp;
            for (int j = 0; j < n; ++j) {
                v[j] = kv * L[j];
                v[n + j] = kk * L[j];
                v[2 * n + j] = kkp * L[j];
                v[3 * n + j] = kp.g * dL[j];
                v[4 * n + j] = kn * L[j];
            }
        };
        const Vector row = adaptive(f, ti, ti + 2.0 * kPi, 5 * n, 1e-12);
        for (int j = 0; j < n; ++j) {
            out.V(i, j) = row[j];
            out.K(i, j) = row[n + j];
            out.Kp(i, j) = row[2 * n + j];
            U(i, j) = row[3 * n + j];
            Nn(i, j) = row[4 * n + j];
        }
    }
    // Outer tangential derivative by spectral differentiation on the nodes.
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            const int dd = a - b;
            D(a, b) = 0.5 * ((dd % 2 == 0) ? 1.0 : -1.0) / std::tan(0.5 * dd * h);
        }
    }
    out.T = D.cast<cd>() * U;
    for (int i = 0; i < n; ++i) out.T.row(i) /= speed[i];
    out.T += -z * Nn;

    // Weyl system with the same conventions as the production solver.
    const Matrix I = Matrix::Identity(n, n);
    auto sample = [&](const weyl::Coupling& c) {
        Eigen::VectorXd v(n);
        for (int j = 0; j < n; ++j) v[j] = c(j * h);
        return v;
    };
    switch (bc.condition.index()) {
        case 0:
            out.densities.phi = (-out.V).fullPivLu().solve(g0);
            break;
        case 1:
            out.densities.psi = (-out.T).fullPivLu().solve(g1);
            break;
        case 2: {
            const auto& r = std::get<weyl::Robin>(bc.condition);
            const Eigen::VectorXd bm = sample(r.b_minus);
            const Eigen::VectorXd bp = sample(r.b_plus);
            const Eigen::VectorXd jump = bp - bm;
            const Eigen::VectorXd d11 = jump.cwiseInverse();
            const Eigen::VectorXd d12 = (0.5 * (bp + bm)).cwiseQuotient(jump);
            const Eigen::VectorXd d22 = bp.cwiseProduct(bm).cwiseQuotient(jump);
            Matrix W(2 * n, 2 * n);
            W << -(Matrix(d11.cast<cd>().asDiagonal()) + out.V), -(Matrix(d12.cast<cd>().asDiagonal()) + out.K),
                -(Matrix(d12.cast<cd>().asDiagonal()) + out.Kp), -(Matrix(d22.cast<cd>().asDiagonal()) + out.T);
            Vector rhs(2 * n);
            rhs << g0, g1;
            const Vector sol = W.fullPivLu().solve(rhs);
            out.densities.phi = sol.head(n);
            out.densities.psi = sol.tail(n);
            break;
        }
        case 3: {
            const Eigen::VectorXd a = sample(std::get<weyl::Delta>(bc.condition).alpha);
            const Matrix A = I + a.cast<cd>().asDiagonal() * out.V;
            out.densities.phi = A.fullPivLu().solve(-(a.cast<cd>().asDiagonal() * g0).eval());
            break;
        }
        case 4: {
            const Eigen::VectorXd b = sample(std::get<weyl::DeltaPrime>(bc.condition).beta);
            const Matrix A = I - b.cast<cd>().asDiagonal() * out.T;
            out.densities.psi = A.fullPivLu().solve((b.cast<cd>().asDiagonal() * g1).eval());
            break;
        }
    }
    return out;
}

}  // namespace weylscat::oracle
