#include "weylscat/geometry.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace weylscat::geometry {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Evaluator {
    double t;
    CurvePoint operator()(const Circle& c) const {
        const double cs = std::cos(t);
        const double sn = std::sin(t);
        return {{c.R * cs, c.R * sn}, {-c.R * sn, c.R * cs}, {-c.R * cs, -c.R * sn}};
    }
    CurvePoint operator()(const Ellipse& e) const {
        const double cs = std::cos(t);
        const double sn = std::sin(t);
        return {{e.a * cs, e.b * sn}, {-e.a * sn, e.b * cs}, {-e.a * cs, -e.b * sn}};
    }
    CurvePoint operator()(const Kite&) const {
        const double c1 = std::cos(t);
        const double s1 = std::sin(t);
        const double c2 = std::cos(2.0 * t);
        const double s2 = std::sin(2.0 * t);
        return {{c1 + 0.65 * c2 - 0.65, 1.5 * s1},
                {-s1 - 1.3 * s2, 1.5 * c1},
                {-c1 - 2.6 * c2, -1.5 * s1}};
    }
    CurvePoint operator()(const TabulatedSmooth& f) const {
        CurvePoint p;
        for (std::size_t m = 0; m < f.modes.size(); ++m) {
            const auto& c = f.modes[m];
            const double dm = static_cast<double>(m);
            const double cs = std::cos(dm * t);
            const double sn = std::sin(dm * t);
            p.x.x += c[0] * cs + c[1] * sn;
            p.x.y += c[2] * cs + c[3] * sn;
            p.dx.x += dm * (-c[0] * sn + c[1] * cs);
            p.dx.y += dm * (-c[2] * sn + c[3] * cs);
            p.ddx.x -= dm * dm * (c[0] * cs + c[1] * sn);
            p.ddx.y -= dm * dm * (c[2] * cs + c[3] * sn);
        }
        return p;
    }
};

void fill_point(BoundaryGrid& g, const CurvePoint& p) {
    const double j = norm(p.dx);
    g.x.push_back(p.x);
    g.jac.push_back(j);
    g.normal.push_back({p.dx.y / j, -p.dx.x / j});
    g.kappa.push_back((p.dx.x * p.ddx.y - p.dx.y * p.ddx.x) / (j * j * j));
}

}  // namespace

TabulatedSmooth load_tabulated(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GeometryError("cannot open tabulated curve file: " + path);
    TabulatedSmooth out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::array<double, 4> row{};
        for (auto& v : row) {
            if (!(ls >> v)) {
                throw GeometryError(path + ":" + std::to_string(lineno) + ": expected four reals");
            }
        }
        std::string extra;
        if (ls >> extra) {
            throw GeometryError(path + ":" + std::to_string(lineno) + ": more than four columns");
        }
        out.modes.push_back(row);
    }
    if (out.modes.empty()) throw GeometryError(path + ": no Fourier modes");
    return out;
}

CurvePoint evaluate(const ClosedCurve& c, double t) { return std::visit(Evaluator{t}, c); }

void validate(const ClosedCurve& c) {
    if (const auto* ci = std::get_if<Circle>(&c)) {
        if (!(ci->R > 0.0)) throw GeometryError("circle radius must be positive");
    } else if (const auto* el = std::get_if<Ellipse>(&c)) {
        if (!(el->a > 0.0) || !(el->b > 0.0)) throw GeometryError("ellipse semi-axes must be positive");
    } else if (const auto* tb = std::get_if<TabulatedSmooth>(&c)) {
        if (tb->modes.empty()) throw GeometryError("tabulated curve has no modes");
    }
    constexpr int kSamples = 4096;
    double min_speed = std::numeric_limits<double>::infinity();
    double max_speed = 0.0;
    double area2 = 0.0;
    for (int j = 0; j < kSamples; ++j) {
        const auto p = evaluate(c, 2.0 * kPi * j / kSamples);
        const double s = norm(p.dx);
        min_speed = std::min(min_speed, s);
        max_speed = std::max(max_speed, s);
        area2 += p.x.x * p.dx.y - p.x.y * p.dx.x;
    }
    if (!(min_speed > 1e-10 * std::max(1.0, max_speed))) {
        throw GeometryError("degenerate parametrization: |x'(t)| vanishes");
    }
    if (!(area2 > 0.0)) throw GeometryError("curve must be oriented counter-clockwise");
}

double BoundaryGrid::h() const {
    return kind == GridKind::Closed ? kPi / half_n : kPi / (2.0 * half_n);
}

double BoundaryGrid::length() const {
    double s = 0.0;
    for (int j = 0; j < size(); ++j) s += w[j] * jac[j];
    return s;
}

double BoundaryGrid::max_spacing() const {
    double m = 0.0;
    const int n = size();
    for (int j = 0; j + 1 < n; ++j) m = std::max(m, norm(x[j + 1] - x[j]));
    if (kind == GridKind::Closed && n > 1) m = std::max(m, norm(x[0] - x[n - 1]));
    return m;
}

BoundaryGrid build_grid(const ClosedCurve& c, int N) {
    if (N < 8) throw GeometryError("build_grid: N must be at least 8");
    if (N % 2 != 0) throw GeometryError("build_grid: N must be even");
    validate(c);
    BoundaryGrid g;
    g.kind = GridKind::Closed;
    g.half_n = N;
    const int n = 2 * N;
    const double h = kPi / N;
    for (int j = 0; j < n; ++j) {
        const double t = h * j;
        g.t.push_back(t);
        fill_point(g, evaluate(c, t));
    }
    g.w.assign(n, h);
    g.w_edge = g.w;
    return g;
}

BoundaryGrid build_arc_grid(const ArcSpec& arc, int N) {
    if (N < 8) throw GeometryError("build_arc_grid: N must be at least 8");
    const double span = arc.t1 - arc.t0;
    if (!(span > 0.0) || !(span < 2.0 * kPi)) {
        throw GeometryError("build_arc_grid: require 0 < t1 - t0 < 2π");
    }
    validate(arc.parent);
    BoundaryGrid g;
    g.kind = GridKind::Arc;
    g.half_n = N;
    g.t0 = arc.t0;
    g.t1 = arc.t1;
    const int n = 2 * N;
    const double h = kPi / n;
    for (int j = 0; j < n; ++j) {
        const double s = (j + 0.5) * h;
        const double t = arc.t0 + 0.5 * span * (1.0 - std::cos(s));
        const double dts = 0.5 * span * std::sin(s);
        g.sigma.push_back(s);
        g.dt_dsigma.push_back(dts);
        g.t.push_back(t);
        fill_point(g, evaluate(arc.parent, t));
        g.w_edge.push_back(h * dts);
        double fe = 1.0;
        for (int m = 1; m <= n / 2; ++m) {
            fe -= 2.0 * std::cos(2.0 * m * s) / (4.0 * m * m - 1.0);
        }
        g.w.push_back(0.5 * span * (2.0 / n) * fe);
    }
    return g;
}

double distance_to_nodes(const BoundaryGrid& g, Vec2 p) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& q : g.x) d = std::min(d, norm(p - q));
    return d;
}

}  // namespace weylscat::geometry
