#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

#include "cli.hpp"
#include "weylscat/layerops.hpp"
#include "weylscat/oracle.hpp"
#include "weylscat/parallel.hpp"
#include "weylscat/scattering.hpp"
#include "weylscat/validation.hpp"

#ifndef WEYLSCAT_VERSION
#define WEYLSCAT_VERSION "0.0.0"
#endif

namespace weylscat::cli {

namespace {

using Clock = std::chrono::steady_clock;
using specfun::cd;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool seeding_golden() {
    const char* v = std::getenv("WEYL_SCATTER_SEED_GOLDEN");
    return v && std::string(v) == "1";
}

/// State shared by the file-producing commands.
struct Session {
    RunConfig cfg;
    fs::path out;
    bool quiet = false;
    json manifest;
    Clock::time_point start = Clock::now();

    void log(const std::string& line) const {
        if (!quiet) std::cerr << line << '\n';
    }

    /// Writes one output file and records it in the manifest.
    void write(const std::string& name, const std::string& content) {
        write_atomic(out / name, content);
        manifest["files"].push_back(name);
    }

    void add_check(const std::string& name, double observed, double tolerance, bool pass) {
        manifest["checks"].push_back({{"name", name}, {"observed", observed}, {"tolerance", tolerance}, {"pass", pass}});
    }

    void finish() {
        manifest["timings"]["total_seconds"] = since(start);
        const auto problems = manifest_problems(manifest);
        if (!problems.empty()) throw std::logic_error("manifest layout: " + problems.front());
        write_atomic(out / "manifest.json", manifest.dump(2) + "\n");
        log("wrote " + (out / "manifest.json").string());
    }
};

Session open_session(const Options& opt, const std::string& command) {
    if (opt.config.empty()) throw ConfigError("--config is required for '" + command + "'");
    Session s;
    s.cfg = load_config(opt.config);
    s.quiet = opt.quiet;
    const std::string out = !opt.out.empty() ? opt.out : s.cfg.output;
    if (out.empty()) throw ConfigError("no output directory: pass --out or set 'output' in the config");
    s.out = out;
    if (fs::exists(s.out) && !fs::is_directory(s.out)) throw ConfigError("output path is not a directory: " + out);
    if (seeding_golden() && fs::exists(s.out) && !fs::is_empty(s.out)) {
        throw ConfigError("WEYL_SCATTER_SEED_GOLDEN=1 refuses to write into the non-empty directory " + out);
    }
    fs::create_directories(s.out);
    set_thread_count(opt.threads > 0 ? opt.threads : s.cfg.threads);

    json conv;
    conv["argument_order"] =
        "s[theta_out, theta_in]: rows and theta_out are observation directions, columns and theta_in incident "
        "directions";
    conv["normalization"] = scattering::kConvention;
    conv["c_k"] = json::array();
    for (double k : s.cfg.k) {
        const cd c = layerops::far_field_constant(k);
        conv["c_k"].push_back({{"k", k}, {"re", c.real()}, {"im", c.imag()}});
    }
    s.manifest = {{"command", command},
                  {"version", WEYLSCAT_VERSION},
                  {"config", s.cfg.echo},
                  {"convention", conv},
                  {"threads", thread_count()},
                  {"runs", json::array()},
                  {"files", json::array()},
                  {"timings", json::object()},
                  {"checks", json::array()}};
    return s;
}

std::string sweep_name(const std::string& stem, const RunConfig& cfg, std::size_t i) {
    if (cfg.k.size() == 1) return stem + ".csv";
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%03zu.csv", i);
    return stem + buf;
}

double single_k(const RunConfig& cfg, const char* command) {
    if (cfg.k.size() != 1) throw ConfigError(std::string("k: '") + command + "' takes a single k value");
    return cfg.k.front();
}

/// Runs task(i) for every sweep index on a bounded pool. With more than one
/// task in flight the inner loops run single-threaded. Results are stored by
/// index, so the worker count never changes what is computed.
template <class Result, class Task>
std::vector<Result> sweep(std::size_t count, Task task) {
    std::vector<Result> results(count);
    const int threads = thread_count();
    const int workers = static_cast<int>(std::min<std::size_t>(threads, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = task(i);
        return results;
    }
    set_thread_count(1);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    results[i] = task(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    set_thread_count(threads);
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

struct FarFieldRun {
    Eigen::MatrixXcd s;
    double rcond = 0.0;
    double seconds = 0.0;
};

FarFieldRun compute_farfield(const RunConfig& cfg, const geometry::BoundaryGrid& grid,
                             const scattering::DirectionGrid& dirs, double k) {
    const auto t0 = Clock::now();
    const auto sys = weyl::assemble_weyl(cfg.bc, specfun::LimitBranch{k, cfg.branch}, grid);
    const auto ff = scattering::scattering_amplitude(sys, dirs);
    return {ff.s, ff.rcond, since(t0)};
}

/// Oracle far field used to seed golden fixtures. Circle, closed curve, constant parameters.
FarFieldRun oracle_farfield(const RunConfig& cfg, const scattering::DirectionGrid& dirs, double k) {
    const auto* circle = std::get_if<geometry::Circle>(&cfg.curve);
    if (!circle || cfg.arc) throw ConfigError("geometry: golden fixtures need a closed circle");
    const auto t0 = Clock::now();
    oracle::MieCoefficients mc;
    try {
        mc = oracle::mie_coefficients(cfg.bc, k, circle->R, oracle::default_n_max(k, circle->R));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bc: ") + e.what());
    }
    Eigen::MatrixXcd s = oracle::mie_farfield(mc, dirs.M);
    if (cfg.branch == specfun::Branch::Plus) s = (-s.adjoint()).eval();
    return {s, 1.0, since(t0)};
}

std::string farfield_csv(const Eigen::MatrixXcd& s, const scattering::DirectionGrid& dirs) {
    std::string out = "theta_out,theta_in,re_s,im_s\n";
    for (int a = 0; a < dirs.M; ++a) {
        for (int b = 0; b < dirs.M; ++b) {
            out += format_real(dirs.theta[a]) + ',' + format_real(dirs.theta[b]) + ',' + format_real(s(a, b).real()) +
                   ',' + format_real(s(a, b).imag()) + '\n';
        }
    }
    return out;
}

std::string smatrix_csv(const Eigen::MatrixXcd& S) {
    std::string out = "row,col,re,im\n";
    for (int a = 0; a < S.rows(); ++a) {
        for (int b = 0; b < S.cols(); ++b) {
            out += std::to_string(a) + ',' + std::to_string(b) + ',' + format_real(S(a, b).real()) + ',' +
                   format_real(S(a, b).imag()) + '\n';
        }
    }
    return out;
}

std::string describe(const FarFieldRun& r, double k, std::size_t i, std::size_t n) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "k=%g (%zu/%zu): %.2f s, rcond %.3e", k, i + 1, n, r.seconds, r.rcond);
    return buf;
}

}  // namespace

int cmd_farfield(const Options& opt) {
    Session s = open_session(opt, "farfield");
    const bool golden = seeding_golden();
    const auto grid = make_grid(s.cfg);
    const scattering::DirectionGrid dirs(s.cfg.M);
    const auto runs = sweep<FarFieldRun>(s.cfg.k.size(), [&](std::size_t i) {
        return golden ? oracle_farfield(s.cfg, dirs, s.cfg.k[i]) : compute_farfield(s.cfg, grid, dirs, s.cfg.k[i]);
    });
    if (golden) s.manifest["golden_source"] = "partial-wave oracle";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const std::string name = sweep_name("farfield", s.cfg, i);
        s.write(name, farfield_csv(runs[i].s, dirs));
        s.manifest["runs"].push_back(
            {{"file", name}, {"k", s.cfg.k[i]}, {"rcond", runs[i].rcond}, {"seconds", runs[i].seconds}});
        s.log(describe(runs[i], s.cfg.k[i], i, runs.size()));
    }
    s.finish();
    return kOk;
}

int cmd_smatrix(const Options& opt) {
    Session s = open_session(opt, "smatrix");
    const auto grid = make_grid(s.cfg);
    const scattering::DirectionGrid dirs(s.cfg.M);
    const auto runs = sweep<FarFieldRun>(s.cfg.k.size(), [&](std::size_t i) {
        return compute_farfield(s.cfg, grid, dirs, s.cfg.k[i]);
    });
    double worst = 0.0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        scattering::FarField ff;
        ff.k = s.cfg.k[i];
        ff.s = runs[i].s;
        const auto S = scattering::s_matrix(ff, dirs);
        const double u = S.unitarity_residual();
        worst = std::max(worst, u);
        const std::string name = sweep_name("smatrix", s.cfg, i);
        s.write(name, smatrix_csv(S.S));
        s.manifest["runs"].push_back({{"file", name},
                                      {"k", s.cfg.k[i]},
                                      {"rcond", runs[i].rcond},
                                      {"seconds", runs[i].seconds},
                                      {"unitarity_residual", u}});
        s.log(describe(runs[i], s.cfg.k[i], i, runs.size()) + ", unitarity residual " + format_real(u));
    }
    s.manifest["unitarity_residual"] = worst;
    s.add_check("unitarity ||S S^H - I||_2", worst, 1e-6, worst <= 1e-6);
    s.finish();
    return kOk;
}

int cmd_field(const Options& opt) {
    Session s = open_session(opt, "field");
    if (!s.cfg.field) throw ConfigError("field: the 'field' section is required for this command");
    if (s.cfg.branch != specfun::Branch::Minus) throw ConfigError("branch: u+ is defined on the minus branch");
    const double k = single_k(s.cfg, "field");
    const auto& spec = *s.cfg.field;
    const auto grid = make_grid(s.cfg);
    const geometry::Vec2 inc{std::cos(spec.incident), std::sin(spec.incident)};
    const auto t0 = Clock::now();
    layerops::set_warnings(false);  // the masked column reports near-boundary points
    const auto sys = weyl::assemble_weyl(s.cfg.bc, specfun::LimitBranch{k, specfun::Branch::Minus}, grid);
    const auto f = scattering::generalized_eigenfunction(sys, inc, spec.points);
    const double secs = since(t0);

    std::string csv = "x,y,re_u,im_u,masked\n";
    int masked = 0;
    for (std::size_t p = 0; p < spec.points.size(); ++p) {
        masked += f.masked[p] ? 1 : 0;
        csv += format_real(spec.points[p].x) + ',' + format_real(spec.points[p].y) + ',' +
               format_real(f.values[p].real()) + ',' + format_real(f.values[p].imag()) + ',' +
               (f.masked[p] ? "1" : "0") + '\n';
    }
    s.write("field.csv", csv);
    s.manifest["runs"].push_back({{"file", "field.csv"},
                                  {"k", k},
                                  {"rcond", sys.rcond},
                                  {"seconds", secs},
                                  {"points", spec.points.size()},
                                  {"masked_points", masked},
                                  {"boundary_residual", f.boundary_residual}});
    s.add_check("boundary condition residual", f.boundary_residual, 1e-10, f.boundary_residual <= 1e-10);

    // Helmholtz residual at the first sample far enough from the boundary.
    for (std::size_t p = 0; p < spec.points.size(); ++p) {
        if (geometry::distance_to_nodes(grid, spec.points[p]) < 0.5) continue;
        const double h = 1e-3;
        const auto x = spec.points[p];
        const std::vector<geometry::Vec2> pts = {x, x + geometry::Vec2{h, 0}, x - geometry::Vec2{h, 0},
                                                 x + geometry::Vec2{0, h}, x - geometry::Vec2{0, h}};
        const auto u = scattering::generalized_eigenfunction(sys, inc, pts).values;
        const cd lap = (u[1] + u[2] + u[3] + u[4] - 4.0 * u[0]) / (h * h);
        const double r = std::abs(lap + k * k * u[0]) / std::abs(u[0]);
        s.manifest["helmholtz_spot_check"] = {{"x", x.x}, {"y", x.y}, {"relative_residual", r}};
        s.add_check("Helmholtz residual spot check", r, 1e-5, r <= 1e-5);
        break;
    }
    layerops::set_warnings(true);
    s.log("field: " + std::to_string(spec.points.size()) + " points, " + std::to_string(masked) + " masked");
    s.finish();
    return kOk;
}

int cmd_resolvent(const Options& opt) {
    Session s = open_session(opt, "resolvent");
    if (!s.cfg.resolvent) throw ConfigError("resolvent: the 'resolvent' section is required for this command");
    const double k = single_k(s.cfg, "resolvent");
    const auto& spec = *s.cfg.resolvent;
    const auto grid = make_grid(s.cfg);
    const double side = s.cfg.branch == specfun::Branch::Minus ? -1.0 : 1.0;

    const auto t0 = Clock::now();
    const auto lim_sys = weyl::assemble_weyl(s.cfg.bc, specfun::LimitBranch{k, s.cfg.branch}, grid);
    const cd lim = scattering::resolvent_kernel(lim_sys, spec.x, spec.y0);
    const cd swapped = scattering::resolvent_kernel(lim_sys, spec.y0, spec.x);

    std::string csv = "eps,re_g,im_g\n";
    json sweep_log = json::array();
    double prev = INFINITY;
    bool monotone = true;
    for (double eps : spec.epsilons) {
        const specfun::OffAxis z{cd(-k * k, side * eps)};
        const cd g = scattering::resolvent_kernel(s.cfg.bc, z, grid, spec.x, spec.y0);
        const double dist = std::abs(g - lim);
        monotone = monotone && dist <= prev;
        prev = dist;
        csv += format_real(eps) + ',' + format_real(g.real()) + ',' + format_real(g.imag()) + '\n';
        sweep_log.push_back({{"eps", eps}, {"distance_to_limit", dist}});
    }
    csv += "0," + format_real(lim.real()) + ',' + format_real(lim.imag()) + '\n';
    const double secs = since(t0);

    s.write("resolvent.csv", csv);
    s.manifest["runs"].push_back({{"file", "resolvent.csv"}, {"k", k}, {"rcond", lim_sys.rcond}, {"seconds", secs}});
    s.manifest["eps_sweep"] = sweep_log;
    s.manifest["eps_sweep_monotone"] = monotone;
    const double asym = std::abs(lim - swapped);
    s.manifest["symmetry_pair"] = {{"g_x_y0", {lim.real(), lim.imag()}},
                                   {"g_y0_x", {swapped.real(), swapped.imag()}},
                                   {"difference", asym}};
    const double tol = 1e-8 * std::max(1.0, std::abs(lim));
    s.add_check("kernel symmetry G(x,y0) = G(y0,x)", asym, tol, asym <= tol);
    s.log("resolvent: limit " + format_real(lim.real()) + " + " + format_real(lim.imag()) + "i, sweep " +
          (monotone ? "monotone" : "not monotone"));
    s.finish();
    return kOk;
}

int cmd_validate(const std::string& level, const Options& opt) {
    validation::Level lv;
    if (level == "quick") {
        lv = validation::Level::Quick;
    } else if (level == "full") {
        lv = validation::Level::Full;
    } else {
        throw ConfigError("validate: level must be 'quick' or 'full'");
    }
    set_thread_count(opt.threads > 0 ? opt.threads : 1);
    const auto t0 = Clock::now();
    if (!opt.quiet) {
        std::printf("%-64s    %-10s %-12s %s\n", "check", "tolerance", "observed", "result");
        std::fflush(stdout);
    }
    const auto results = validation::run_suite(lv, [&](const validation::CheckResult& r) {
        if (!opt.quiet || !r.pass) {
            std::printf("%s\n", validation::format_row(r).c_str());
            std::fflush(stdout);
        }
    });
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    const double secs = since(t0);
    std::printf("validate %s: %zu checks, %d failed, %.1f s\n", level.c_str(), results.size(), failed, secs);

    if (!opt.out.empty()) {
        fs::create_directories(opt.out);
        json checks = json::array();
        for (const auto& r : results) {
            checks.push_back({{"name", r.name},
                              {"criterion", r.criterion},
                              {"tolerance", r.tolerance},
                              {"observed", std::isfinite(r.observed) ? json(r.observed) : json(nullptr)},
                              {"pass", r.pass},
                              {"seconds", r.seconds}});
        }
        json m = {{"command", "validate " + level},
                  {"version", WEYLSCAT_VERSION},
                  {"config", {{"level", level}}},
                  {"convention",
                   {{"argument_order", "rows observation, columns incidence"},
                    {"normalization", scattering::kConvention}}},
                  {"runs", json::array()},
                  {"files", json::array()},
                  {"timings", {{"total_seconds", secs}}},
                  {"checks", checks}};
        write_atomic(fs::path(opt.out) / "manifest.json", m.dump(2) + "\n");
    }
    return failed == 0 ? kOk : kValidationFailure;
}

}  // namespace weylscat::cli
