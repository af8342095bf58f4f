#include "weylscat/scattering.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>

namespace weylscat::scattering {

namespace {

constexpr double kPi = specfun::kPi;
const cd kPrefactor = cd(0.0, -1.0 / (4.0 * kPi));
std::atomic<bool> g_phase_flip{false};

const specfun::LimitBranch& limit_of(const weyl::WeylSystem& sys, const char* who) {
    const auto* lb = std::get_if<specfun::LimitBranch>(&sys.s);
    if (!lb) throw specfun::DomainError(std::string(who) + ": needs a limit-branch system");
    return *lb;
}

Eigen::VectorXd pair_weights(const BoundaryGrid& g) {
    Eigen::VectorXd w(g.size());
    for (int j = 0; j < g.size(); ++j) w[j] = g.w_edge[j] * g.jac[j];
    return w;
}

void plane_wave_traces(double k, const BoundaryGrid& grid, const DirectionGrid& dirs, Matrix& G0, Matrix& G1) {
    const int n = grid.size();
    G0.resize(n, dirs.M);
    G1.resize(n, dirs.M);
    for (int m = 0; m < dirs.M; ++m) {
        const auto t = weyl::trace_plane_wave(k, dirs.dir[m], grid);
        G0.col(m) = t.g0;
        G1.col(m) = t.g1;
    }
}

/// -(i/4π) Σ_j w_j [conj(A0) B0 + conj(A1) B1], with empty blocks skipped.
Matrix weighted_pairing(const Eigen::VectorXd& w, const Matrix& A0, const Matrix& A1, const Matrix& B0,
                        const Matrix& B1, int rows, int cols) {
    Matrix out = Matrix::Zero(rows, cols);
    if (A0.size() > 0 && B0.size() > 0) out += A0.adjoint() * (w.asDiagonal() * B0);
    if (A1.size() > 0 && B1.size() > 0) out += A1.adjoint() * (w.asDiagonal() * B1);
    return kPrefactor * out;
}

}  // namespace

const char* const kConvention =
    "s[out,in] = -(i/4pi) sum_j w_j |x'_j| conj(trace_out) . density_in; rows = observation direction, "
    "columns = incident direction; S = I - s*(2pi/M); scattered field ~ -pi*sqrt(2/(pi k))*exp(-i pi/4)"
    "*exp(ik|x|)/sqrt(|x|)*s";

DirectionGrid::DirectionGrid(int M_) : M(M_) {
    if (M <= 0) throw std::invalid_argument("DirectionGrid: M must be positive");
    theta.resize(M);
    dir.resize(M);
    for (int m = 0; m < M; ++m) {
        theta[m] = 2.0 * kPi * m / M;
        dir[m] = {std::cos(theta[m]), std::sin(theta[m])};
    }
}

double DirectionGrid::weight() const { return 2.0 * kPi / M; }

int DirectionGrid::opposite(int m) const {
    if (M % 2 != 0) throw std::invalid_argument("DirectionGrid: opposite direction needs even M");
    return (m + M / 2) % M;
}

FarField scattering_amplitude(const weyl::WeylSystem& sys, const DirectionGrid& dirs) {
    const auto& lb = limit_of(sys, "scattering_amplitude");
    Matrix G0;
    Matrix G1;
    plane_wave_traces(lb.k, sys.grid, dirs, G0, G1);
    const auto rho = sys.solve(G0, G1);
    if (g_phase_flip.load()) {
        DirectionGrid reversed = dirs;
        for (auto& d : reversed.dir) d = -1.0 * d;
        plane_wave_traces(lb.k, sys.grid, reversed, G0, G1);
    }
    FarField ff;
    ff.k = lb.k;
    ff.condition = weyl::condition_name(sys.bc);
    ff.branch = lb.branch;
    ff.rcond = sys.rcond;
    ff.s = weighted_pairing(pair_weights(sys.grid), G0, G1, rho.phi, rho.psi, dirs.M, dirs.M);
    return ff;
}

FarField scattering_amplitude(const BoundaryCondition& bc, double k, const BoundaryGrid& grid,
                              const DirectionGrid& dirs, specfun::Branch branch) {
    const auto sys = weyl::assemble_weyl(bc, specfun::LimitBranch{k, branch}, grid);
    return scattering_amplitude(sys, dirs);
}

FarField scattering_amplitude_dual(const BoundaryCondition& bc, double k, const BoundaryGrid& grid,
                                   const DirectionGrid& dirs) {
    const auto sys = weyl::assemble_weyl(bc, specfun::LimitBranch{k, specfun::Branch::Plus}, grid);
    Matrix G0;
    Matrix G1;
    plane_wave_traces(k, grid, dirs, G0, G1);
    const auto rho = sys.solve(G0, G1);
    FarField ff;
    ff.k = k;
    ff.condition = weyl::condition_name(bc);
    ff.branch = specfun::Branch::Minus;
    ff.rcond = sys.rcond;
    ff.s = weighted_pairing(pair_weights(grid), rho.phi, rho.psi, G0, G1, dirs.M, dirs.M);
    return ff;
}

double SMatrix::unitarity_residual() const {
    const Matrix E = S * S.adjoint() - Matrix::Identity(S.rows(), S.cols());
    const Matrix H = 0.5 * (E + E.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

SMatrix s_matrix(const FarField& ff, const DirectionGrid& dirs) {
    if (ff.s.rows() != dirs.M || ff.s.cols() != dirs.M) {
        throw std::invalid_argument("s_matrix: far field and direction grid disagree");
    }
    return {Matrix::Identity(dirs.M, dirs.M) - ff.s * dirs.weight()};
}

double cross_section(const FarField& ff, const DirectionGrid& dirs, int incident) {
    return dirs.weight() * ff.s.col(incident).squaredNorm();
}

EigenfunctionField generalized_eigenfunction(const weyl::WeylSystem& sys, Vec2 incident,
                                             const std::vector<Vec2>& points) {
    const auto& lb = limit_of(sys, "generalized_eigenfunction");
    if (lb.branch != specfun::Branch::Minus) {
        throw specfun::DomainError("generalized_eigenfunction: u+ uses the outgoing (Minus) system");
    }
    EigenfunctionField f;
    f.k = lb.k;
    f.incident = incident;
    f.points = points;
    const auto tr = weyl::trace_plane_wave(lb.k, incident, sys.grid);
    f.g0 = tr.g0;
    f.g1 = tr.g1;
    f.densities = weyl::solve_weyl(sys, tr.g0, tr.g1);
    f.boundary_residual = weyl::boundary_residual(sys, tr.g0, tr.g1, f.densities);
    f.masked = layerops::near_boundary(sys.grid, points);
    f.values = layerops::eval_potential(sys.s, sys.grid, f.densities.phi, f.densities.psi, points);
    for (std::size_t p = 0; p < points.size(); ++p) {
        f.values[p] += std::exp(cd(0.0, lb.k * dot(incident, points[p])));
    }
    return f;
}

EigenfunctionField generalized_eigenfunction(const BoundaryCondition& bc, double k, const BoundaryGrid& grid,
                                             Vec2 incident, const std::vector<Vec2>& points) {
    const auto sys = weyl::assemble_weyl(bc, specfun::LimitBranch{k, specfun::Branch::Minus}, grid);
    return generalized_eigenfunction(sys, incident, points);
}

cd resolvent_kernel(const weyl::WeylSystem& sys, Vec2 x, Vec2 y0) {
    const double r = norm(x - y0);
    if (!(r > 0.0)) throw specfun::DomainError("resolvent_kernel: x and y0 must differ");
    const auto tr = weyl::trace_point_source(sys.s, y0, sys.grid);
    const auto d = weyl::solve_weyl(sys, tr.g0, tr.g1);
    const auto corr = layerops::eval_potential(sys.s, sys.grid, d.phi, d.psi, {x});
    return specfun::green_kernel(sys.s, r) + corr[0];
}

cd resolvent_kernel(const BoundaryCondition& bc, const specfun::SpectralParameter& s, const BoundaryGrid& grid,
                    Vec2 x, Vec2 y0) {
    const auto sys = weyl::assemble_weyl(bc, s, grid);
    return resolvent_kernel(sys, x, y0);
}

namespace testing {
void set_farfield_phase_flip(bool on) { g_phase_flip.store(on); }
}  // namespace testing

}  // namespace weylscat::scattering
