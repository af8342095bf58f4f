#include "weylscat/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace weylscat::specfun {

namespace {

constexpr double kRescale = 1e250;

// Miller's downward recurrence. Fills J_0..J_m where m is the (even) start order.
void miller(int nmax, double x, std::vector<double>& f) {
    const double top = std::max<double>(nmax, std::ceil(x));
    int m = static_cast<int>(top + 40.0 + 10.0 * std::cbrt(top));
    m += m % 2;
    f.assign(static_cast<std::size_t>(m) + 2, 0.0);
    f[m + 1] = 0.0;
    f[m] = 1e-300;
    for (int k = m; k >= 1; --k) {
        f[k - 1] = (2.0 * k / x) * f[k] - f[k + 1];
        if (std::abs(f[k - 1]) > kRescale) {
            for (int j = k - 1; j <= m; ++j) f[j] /= kRescale;
        }
    }
    double norm = f[0];
    for (int k = 2; k <= m; k += 2) norm += 2.0 * f[k];
    for (auto& v : f) v /= norm;
}

void check_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(what) + ": argument must be positive and finite");
    }
}

int reflect_sign(int& n) {
    if (n >= 0) return 1;
    n = -n;
    return (n % 2 == 0) ? 1 : -1;
}

// Neumann-type series for Y0 and Y1 in terms of the Miller J sequence.
void y01_from_j(const std::vector<double>& J, double x, double& y0, double& y1) {
    const int m = static_cast<int>(J.size()) - 2;
    const double lg = std::log(0.5 * x) + kEulerGamma;
    double s0 = 0.0;
    double s1 = 0.0;
    for (int k = 1; 2 * k + 1 <= m; ++k) {
        const double sg = (k % 2 == 0) ? 1.0 : -1.0;
        s0 += sg * J[2 * k] / k;
        s1 += sg * (J[2 * k - 1] - J[2 * k + 1]) / k;
    }
    y0 = (2.0 / kPi) * (lg * J[0] - 2.0 * s0);
    y1 = (2.0 / kPi) * (-J[0] / x + lg * J[1] + s1);
}

cd k_series(int order, cd w) {
    const cd half = 0.5 * w;
    const cd t = half * half;
    const cd lg = std::log(half);
    if (order == 0) {
        cd term = 1.0;
        cd i0 = 1.0;
        cd s = 0.0;
        double harmonic = 0.0;
        for (int m = 1; m < 200; ++m) {
            term *= t / (static_cast<double>(m) * m);
            harmonic += 1.0 / m;
            i0 += term;
            s += harmonic * term;
            if (std::abs(term) * (harmonic + 1.0) < 1e-18 * std::abs(i0) && m > std::abs(t)) break;
        }
        return -(lg + kEulerGamma) * i0 + s;
    }
    // order 1
    cd term = 1.0;  // t^m / (m! (m+1)!)
    cd i1 = 1.0;
    double hm = 0.0;   // H_m
    double hm1 = 1.0;  // H_{m+1}
    cd s = (hm - kEulerGamma) + (hm1 - kEulerGamma);
    for (int m = 1; m < 200; ++m) {
        term *= t / (static_cast<double>(m) * (m + 1));
        hm += 1.0 / m;
        hm1 += 1.0 / (m + 1);
        i1 += term;
        s += ((hm - kEulerGamma) + (hm1 - kEulerGamma)) * term;
        if (std::abs(term) * (hm1 + 1.0) < 1e-18 * std::abs(i1) && m > std::abs(t)) break;
    }
    return 1.0 / w + lg * half * i1 - 0.5 * half * s;
}

// Steed's continued fraction (Temme's CF2) for K0 and K1.
void k_steed(cd x, cd& k0, cd& k1) {
    cd b = 2.0 * (1.0 + x);
    cd d = 1.0 / b;
    cd h = d;
    cd delh = d;
    cd q1 = 0.0;
    cd q2 = 1.0;
    const double a1 = 0.25;
    cd q = a1;
    cd c = a1;
    cd a = -a1;
    cd s = 1.0 + q * delh;
    for (int i = 2; i < 100000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / static_cast<double>(i);
        const cd qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const cd dels = q * delh;
        s += dels;
        if (std::abs(dels) < 1e-17 * std::abs(s)) break;
    }
    h = a1 * h;
    k0 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
    k1 = k0 * (x + 0.5 - h) / x;
}

cd k_asymptotic(int order, cd w) {
    const double mu = 4.0 * order * order;
    cd term = 1.0;
    cd sum = 1.0;
    double last = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * w);
        const double mag = std::abs(term);
        if (mag > last) break;
        sum += term;
        last = mag;
        if (mag < 1e-18) break;
    }
    return std::sqrt(kPi / (2.0 * w)) * std::exp(-w) * sum;
}

}  // namespace

void validate(const SpectralParameter& s) {
    if (const auto* off = std::get_if<OffAxis>(&s)) {
        const cd z = off->z;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw DomainError("spectral parameter: z must be finite");
        }
        if (z.imag() == 0.0 && z.real() <= 0.0) {
            throw DomainError("spectral parameter: z lies on the cut (-inf, 0]");
        }
    } else {
        const auto& lim = std::get<LimitBranch>(s);
        if (!(lim.k > 0.0) || !std::isfinite(lim.k)) {
            throw DomainError("spectral parameter: limit branch requires k > 0");
        }
    }
}

cd spectral_z(const SpectralParameter& s) {
    if (const auto* off = std::get_if<OffAxis>(&s)) return off->z;
    const auto& lim = std::get<LimitBranch>(s);
    return cd(-lim.k * lim.k, 0.0);
}

cd kernel_wavenumber(const SpectralParameter& s) {
    if (const auto* off = std::get_if<OffAxis>(&s)) return std::sqrt(off->z);
    const auto& lim = std::get<LimitBranch>(s);
    return lim.branch == Branch::Minus ? cd(0.0, -lim.k) : cd(0.0, lim.k);
}

void bessel_jy(int nmax, double x, std::vector<double>& J, std::vector<double>& Y) {
    check_positive(x, "bessel_jy");
    if (nmax < 0) throw DomainError("bessel_jy: negative nmax");
    std::vector<double> f;
    miller(std::max(nmax, 1), x, f);
    J.assign(f.begin(), f.begin() + nmax + 1);
    double y0 = 0.0;
    double y1 = 0.0;
    y01_from_j(f, x, y0, y1);
    Y.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
    Y[0] = y0;
    if (nmax >= 1) Y[1] = y1;
    for (int n = 1; n < nmax; ++n) Y[n + 1] = (2.0 * n / x) * Y[n] - Y[n - 1];
}

BesselJY01 bessel_jy01(double x) {
    check_positive(x, "bessel_jy01");
    thread_local std::vector<double> f;
    miller(1, x, f);
    BesselJY01 out{f[0], f[1], 0.0, 0.0};
    y01_from_j(f, x, out.y0, out.y1);
    return out;
}

double bessel_j(int n, double x) {
    const int sg = reflect_sign(n);
    check_positive(x, "bessel_j");
    std::vector<double> f;
    miller(n, x, f);
    return sg * f[n];
}

double bessel_y(int n, double x) {
    const int sg = reflect_sign(n);
    std::vector<double> J;
    std::vector<double> Y;
    bessel_jy(n, x, J, Y);
    return sg * Y[n];
}

cd hankel1(int n, double x) {
    const int sg = reflect_sign(n);
    std::vector<double> J;
    std::vector<double> Y;
    bessel_jy(n, x, J, Y);
    return static_cast<double>(sg) * cd(J[n], Y[n]);
}

double bessel_j_prime(int n, double x) {
    if (n == 0) return -bessel_j(1, x);
    return bessel_j(n - 1, x) - (n / x) * bessel_j(n, x);
}

double bessel_y_prime(int n, double x) {
    if (n == 0) return -bessel_y(1, x);
    return bessel_y(n - 1, x) - (n / x) * bessel_y(n, x);
}

cd hankel1_prime(int n, double x) {
    if (n == 0) return -hankel1(1, x);
    return hankel1(n - 1, x) - (n / x) * hankel1(n, x);
}

cd mod_bessel_k(int order, cd w) {
    if (order != 0 && order != 1) throw DomainError("mod_bessel_k: order must be 0 or 1");
    if (!(w.real() > 0.0)) throw DomainError("mod_bessel_k: requires Re(w) > 0");
    const double a = std::abs(w);
    if (a <= 2.0) return k_series(order, w);
    if (a <= 20.0) {
        cd k0;
        cd k1;
        k_steed(w, k0, k1);
        return order == 0 ? k0 : k1;
    }
    return k_asymptotic(order, w);
}

cd mod_bessel_i(int order, cd w) {
    if (order != 0 && order != 1) throw DomainError("mod_bessel_i: order must be 0 or 1");
    const cd half = 0.5 * w;
    const cd t = half * half;
    cd term = (order == 0) ? cd(1.0) : half;
    cd sum = term;
    for (int m = 1; m < 500; ++m) {
        term *= t / (static_cast<double>(m) * (m + order));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) && m > std::abs(t)) break;
    }
    return sum;
}

cd green_kernel(const SpectralParameter& s, double r) {
    validate(s);
    if (!(r > 0.0)) throw DomainError("green_kernel: r must be positive");
    if (const auto* off = std::get_if<OffAxis>(&s)) {
        return mod_bessel_k(0, std::sqrt(off->z) * r) / (2.0 * kPi);
    }
    const auto& lim = std::get<LimitBranch>(s);
    const auto b = bessel_jy01(lim.k * r);
    const cd out = cd(0.0, 0.25) * cd(b.j0, b.y0);
    return lim.branch == Branch::Minus ? out : std::conj(out);
}

KernelParts kernel_parts(const SpectralParameter& s, double r) {
    KernelParts p;
    if (const auto* off = std::get_if<OffAxis>(&s)) {
        const cd w = std::sqrt(off->z);
        const cd wr = w * r;
        p.g = mod_bessel_k(0, wr) / (2.0 * kPi);
        p.dg = -w * mod_bessel_k(1, wr) / (2.0 * kPi);
        p.a0 = -mod_bessel_i(0, wr) / (2.0 * kPi);
        p.a1 = -w * mod_bessel_i(1, wr) / (2.0 * kPi * r);
        return p;
    }
    const auto& lim = std::get<LimitBranch>(s);
    const double k = lim.k;
    const auto b = bessel_jy01(k * r);
    cd g = cd(0.0, 0.25) * cd(b.j0, b.y0);
    cd dg = cd(0.0, -0.25 * k) * cd(b.j1, b.y1);
    if (lim.branch == Branch::Plus) {
        g = std::conj(g);
        dg = std::conj(dg);
    }
    p.g = g;
    p.dg = dg;
    p.a0 = -b.j0 / (2.0 * kPi);
    p.a1 = k * b.j1 / (2.0 * kPi * r);
    return p;
}

cd green_log_constant(const SpectralParameter& s) {
    const cd w = kernel_wavenumber(s);
    return -(std::log(0.5 * w) + kEulerGamma) / (2.0 * kPi);
}

}  // namespace weylscat::specfun
