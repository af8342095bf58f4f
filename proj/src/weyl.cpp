#include "weylscat/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace weylscat::weyl {

namespace {

constexpr double kTwoPi = 2.0 * specfun::kPi;

Matrix diag(const std::vector<double>& v) {
    Matrix D = Matrix::Zero(static_cast<int>(v.size()), static_cast<int>(v.size()));
    for (std::size_t j = 0; j < v.size(); ++j) D(j, j) = v[j];
    return D;
}

std::vector<double> sample(const Coupling& c, const BoundaryGrid& g) {
    std::vector<double> out(g.size());
    for (int j = 0; j < g.size(); ++j) out[j] = c(g.t[j]);
    return out;
}

Layout layout_of(const Condition& c) {
    if (std::holds_alternative<Dirichlet>(c) || std::holds_alternative<Delta>(c)) return Layout::SinglePhi;
    if (std::holds_alternative<Neumann>(c) || std::holds_alternative<DeltaPrime>(c)) return Layout::SinglePsi;
    return Layout::TwoByTwo;
}

unsigned mask_of(const Condition& c) {
    if (std::holds_alternative<Dirichlet>(c) || std::holds_alternative<Delta>(c)) return layerops::kV;
    if (std::holds_alternative<Neumann>(c) || std::holds_alternative<DeltaPrime>(c)) return layerops::kT;
    return layerops::kAll;
}

void check_support(const BoundaryCondition& bc, const BoundaryGrid& g) {
    if (std::holds_alternative<FullCurve>(bc.support)) {
        if (g.kind != geometry::GridKind::Closed) throw InvalidCondition("full-curve condition needs a closed grid");
        return;
    }
    const auto& arc = std::get<geometry::ArcSpec>(bc.support);
    if (g.kind != geometry::GridKind::Arc || g.t0 != arc.t0 || g.t1 != arc.t1) {
        throw InvalidCondition("arc condition needs the grid of the same arc");
    }
}

/// Π γ G_z Π' for the given layout.
Matrix gamma_g(const layerops::LayerOperatorSet& ops, Layout layout, int n) {
    switch (layout) {
        case Layout::SinglePhi:
            return ops.V;
        case Layout::SinglePsi:
            return ops.T;
        case Layout::TwoByTwo: {
            Matrix G(2 * n, 2 * n);
            G << ops.V, ops.K, ops.Kp, ops.T;
            return G;
        }
    }
    return {};
}

Matrix b_theta(const WeylSystem& sys) {
    const int n = sys.n();
    const auto& c = sys.bc.condition;
    if (std::holds_alternative<Delta>(c)) {
        std::vector<double> d(n);
        for (int j = 0; j < n; ++j) {
            if (sys.c1[j] == 0.0) throw InvalidCondition("B_Θ undefined for α = 0");
            d[j] = -1.0 / sys.c1[j];
        }
        return diag(d);
    }
    if (std::holds_alternative<DeltaPrime>(c)) {
        std::vector<double> d(n);
        for (int j = 0; j < n; ++j) {
            if (sys.c1[j] == 0.0) throw InvalidCondition("B_Θ undefined for β = 0");
            d[j] = 1.0 / sys.c1[j];
        }
        return diag(d);
    }
    if (std::holds_alternative<Robin>(c)) {
        std::vector<double> d11(n), d12(n), d22(n);
        for (int j = 0; j < n; ++j) {
            const double bm = sys.c1[j];
            const double bp = sys.c2[j];
            const double jump = bp - bm;
            d11[j] = -1.0 / jump;
            d12[j] = -0.5 * (bp + bm) / jump;
            d22[j] = -bp * bm / jump;
        }
        Matrix B(2 * n, 2 * n);
        B << diag(d11), diag(d12), diag(d12), diag(d22);
        return B;
    }
    throw InvalidCondition("B_Θ is unbounded for Dirichlet and Neumann conditions");
}

}  // namespace

Coupling::Coupling(double value) : value_(value) {}

Coupling Coupling::function(std::function<double(double)> f) {
    Coupling c;
    c.fn_ = std::move(f);
    return c;
}

Coupling Coupling::tabulated(std::vector<double> t, std::vector<double> values) {
    if (t.empty() || t.size() != values.size()) throw InvalidCondition("tabulated coupling: size mismatch");
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1])) throw InvalidCondition("tabulated coupling: t must be ascending");
    }
    if (t.front() < 0.0 || t.back() >= kTwoPi) throw InvalidCondition("tabulated coupling: t must lie in [0, 2π)");
    return function([t = std::move(t), v = std::move(values)](double s) {
        if (t.size() == 1) return v[0];
        double u = std::fmod(s, kTwoPi);
        if (u < 0.0) u += kTwoPi;
        const auto it = std::upper_bound(t.begin(), t.end(), u);
        std::size_t hi = static_cast<std::size_t>(it - t.begin());
        std::size_t lo;
        double tl;
        double th;
        if (hi == 0 || hi == t.size()) {
            lo = t.size() - 1;
            hi = 0;
            tl = t[lo];
            th = t[0] + kTwoPi;
            if (u < tl) u += kTwoPi;
        } else {
            lo = hi - 1;
            tl = t[lo];
            th = t[hi];
        }
        const double a = (u - tl) / (th - tl);
        return (1.0 - a) * v[lo] + a * v[hi];
    });
}

double Coupling::operator()(double t) const { return fn_ ? fn_(t) : value_; }

std::string condition_name(const BoundaryCondition& bc) {
    static const char* names[] = {"dirichlet", "neumann", "robin", "delta", "delta_prime"};
    std::string out = names[bc.condition.index()];
    if (std::holds_alternative<geometry::ArcSpec>(bc.support)) out += "@arc";
    return out;
}

BoundaryGrid support_grid(const geometry::ClosedCurve& curve, const BoundaryCondition& bc, int N) {
    if (const auto* arc = std::get_if<geometry::ArcSpec>(&bc.support)) return geometry::build_arc_grid(*arc, N);
    return geometry::build_grid(curve, N);
}

WeylSystem assemble_weyl(const BoundaryCondition& bc, const SpectralParameter& s, const BoundaryGrid& grid) {
    specfun::validate(s);
    check_support(bc, grid);
    const bool on_arc = std::holds_alternative<geometry::ArcSpec>(bc.support);

    WeylSystem sys;
    sys.bc = bc;
    sys.s = s;
    sys.layout = layout_of(bc.condition);
    sys.grid = grid;
    const int n = grid.size();

    if (const auto* r = std::get_if<Robin>(&bc.condition)) {
        sys.c1 = sample(r->b_minus, grid);
        sys.c2 = sample(r->b_plus, grid);
        for (int j = 0; j < n; ++j) {
            if (!std::isfinite(sys.c1[j]) || !std::isfinite(sys.c2[j])) {
                throw InvalidCondition("Robin coefficients must be finite");
            }
            if (sys.c2[j] == sys.c1[j]) throw InvalidCondition("Robin: b+ - b- vanishes at a node");
            if (on_arc && !(sys.c1[j] > sys.c2[j])) throw InvalidCondition("Robin on an arc requires b- > b+");
        }
    } else if (const auto* d = std::get_if<Delta>(&bc.condition)) {
        sys.c1 = sample(d->alpha, grid);
    } else if (const auto* dp = std::get_if<DeltaPrime>(&bc.condition)) {
        sys.c1 = sample(dp->beta, grid);
    }
    for (double v : sys.c1) {
        if (!std::isfinite(v)) throw InvalidCondition("coupling must be finite");
    }

    sys.ops = layerops::assemble(s, grid, mask_of(bc.condition));
    const Matrix I = Matrix::Identity(n, n);
    switch (bc.condition.index()) {
        case 0:
            sys.A = -sys.ops.V;
            break;
        case 1:
            sys.A = -sys.ops.T;
            break;
        case 2:
            sys.A = sys.krein_form();
            break;
        case 3:
            sys.A = I + diag(sys.c1) * sys.ops.V;
            break;
        case 4:
            sys.A = I - diag(sys.c1) * sys.ops.T;
            break;
    }
    sys.lu_.compute(sys.A);
    sys.rcond = sys.lu_.rcond();
    if (!(sys.rcond >= kSingularRcond)) {
        std::ostringstream msg;
        msg << "singular " << condition_name(bc) << " system (reciprocal condition estimate " << sys.rcond
            << ")";
        throw SingularSystemError(msg.str(), sys.rcond);
    }
    return sys;
}

DensityBlock WeylSystem::solve(const Matrix& g0, const Matrix& g1) const {
    const int nn = n();
    DensityBlock out;
    switch (bc.condition.index()) {
        case 0:
            out.phi = lu_.solve(g0);
            break;
        case 1:
            out.psi = lu_.solve(g1);
            break;
        case 2: {
            Matrix rhs(2 * nn, g0.cols());
            rhs << g0, g1;
            const Matrix x = lu_.solve(rhs);
            out.phi = x.topRows(nn);
            out.psi = x.bottomRows(nn);
            break;
        }
        case 3:
            out.phi = lu_.solve(-(diag(c1) * g0));
            break;
        case 4:
            out.psi = lu_.solve(diag(c1) * g1);
            break;
    }
    return out;
}

Matrix WeylSystem::krein_form() const {
    const int nn = n();
    switch (bc.condition.index()) {
        case 0:
            return -ops.V;
        case 1:
            return -ops.T;
        default:
            return b_theta(*this) - gamma_g(ops, layout, nn);
    }
}

Traces trace_plane_wave(double k, geometry::Vec2 incident, const BoundaryGrid& grid) {
    if (!(k > 0.0)) throw specfun::DomainError("trace_plane_wave: k must be positive");
    const int n = grid.size();
    Traces t{Vector(n), Vector(n)};
    for (int j = 0; j < n; ++j) {
        const cd e = std::exp(cd(0.0, k * dot(incident, grid.x[j])));
        t.g0[j] = e;
        t.g1[j] = cd(0.0, k * dot(incident, grid.normal[j])) * e;
    }
    return t;
}

Traces trace_point_source(const SpectralParameter& s, geometry::Vec2 y0, const BoundaryGrid& grid) {
    const int n = grid.size();
    Traces t{Vector(n), Vector(n)};
    for (int j = 0; j < n; ++j) {
        const auto d = grid.x[j] - y0;
        const double r = norm(d);
        const auto kp = specfun::kernel_parts(s, r);
        t.g0[j] = kp.g;
        t.g1[j] = kp.dg * dot(d, grid.normal[j]) / r;
    }
    return t;
}

Densities solve_weyl(const WeylSystem& system, const Vector& g0, const Vector& g1) {
    const int n = system.n();
    if (g0.size() != n || g1.size() != n) throw std::invalid_argument("solve_weyl: trace size mismatch");
    const auto block = system.solve(g0, g1);
    Densities d;
    if (block.phi.size() > 0) d.phi = block.phi.col(0);
    if (block.psi.size() > 0) d.psi = block.psi.col(0);
    return d;
}

double boundary_residual(const WeylSystem& sys, const Vector& g0, const Vector& g1, const Densities& d) {
    const int n = sys.n();
    const Vector zero = Vector::Zero(n);
    const Vector& phi = d.phi.size() == n ? d.phi : zero;
    const Vector& psi = d.psi.size() == n ? d.psi : zero;
    const auto& ops = sys.ops;
    Vector a0 = g0;
    Vector a1 = g1;
    if (ops.V.size() > 0) a0 += ops.V * phi;
    if (ops.K.size() > 0) a0 += ops.K * psi;
    if (ops.Kp.size() > 0) a1 += ops.Kp * phi;
    if (ops.T.size() > 0) a1 += ops.T * psi;
    const Vector ext0 = a0 + 0.5 * psi;
    const Vector int0 = a0 - 0.5 * psi;
    const Vector ext1 = a1 - 0.5 * phi;
    const Vector int1 = a1 + 0.5 * phi;
    Vector r;
    switch (sys.bc.condition.index()) {
        case 0:
            r = ext0.cwiseAbs().cwiseMax(int0.cwiseAbs()).cast<cd>();
            break;
        case 1:
            r = ext1.cwiseAbs().cwiseMax(int1.cwiseAbs()).cast<cd>();
            break;
        case 2: {
            Vector e(n);
            Vector i(n);
            for (int j = 0; j < n; ++j) {
                e[j] = ext1[j] - sys.c2[j] * ext0[j];
                i[j] = int1[j] - sys.c1[j] * int0[j];
            }
            r = e.cwiseAbs().cwiseMax(i.cwiseAbs()).cast<cd>();
            break;
        }
        case 3:
            r.resize(n);
            for (int j = 0; j < n; ++j) r[j] = sys.c1[j] * a0[j] - (ext1[j] - int1[j]);
            break;
        case 4:
            r.resize(n);
            for (int j = 0; j < n; ++j) r[j] = sys.c1[j] * a1[j] - (ext0[j] - int0[j]);
            break;
    }
    const double scale = std::max({g0.cwiseAbs().maxCoeff(), g1.cwiseAbs().maxCoeff(), 1e-300});
    return r.cwiseAbs().maxCoeff() / scale;
}

Matrix krein_matrix(const WeylSystem& sys, const SpectralParameter& z0) {
    const int n = sys.n();
    WeylSystem ref;
    ref.bc = sys.bc;
    ref.s = z0;
    ref.layout = sys.layout;
    ref.grid = sys.grid;
    ref.c1 = sys.c1;
    ref.c2 = sys.c2;
    ref.ops = layerops::assemble(z0, sys.grid, mask_of(sys.bc.condition));
    const Matrix theta = ref.krein_form();
    const Matrix m = gamma_g(ref.ops, sys.layout, n) - gamma_g(sys.ops, sys.layout, n);
    return theta + m;
}

Matrix b_theta_matrix(const WeylSystem& sys) { return b_theta(sys) - gamma_g(sys.ops, sys.layout, sys.n()); }

}  // namespace weylscat::weyl
