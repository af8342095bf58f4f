#include <cmath>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace weylscat::cli {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& msg) {
    throw ConfigError("config field '" + field + "': " + msg);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) bad(path + key, "missing");
    return obj.at(key);
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) bad(field, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(field, "must be finite");
    return d;
}

double positive(const json& v, const std::string& field) {
    const double d = number(v, field);
    if (!(d > 0.0)) bad(field, "must be positive");
    return d;
}

int positive_int(const json& v, const std::string& field) {
    if (!v.is_number_integer()) bad(field, "expected an integer");
    const long long n = v.get<long long>();
    if (n <= 0 || n > 1'000'000) bad(field, "must be a positive integer");
    return static_cast<int>(n);
}

std::string text(const json& v, const std::string& field) {
    if (!v.is_string()) bad(field, "expected a string");
    return v.get<std::string>();
}

geometry::Vec2 point(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2) bad(field, "expected [x, y]");
    return {number(v[0], field + "[0]"), number(v[1], field + "[1]")};
}

weyl::Coupling coupling(const json& v, const std::string& field) {
    if (v.is_number()) return number(v, field);
    if (!v.is_object()) bad(field, "expected a number or {\"t\": [...], \"values\": [...]}");
    const auto& t = require(v, "t", field + ".");
    const auto& vals = require(v, "values", field + ".");
    if (!t.is_array() || !vals.is_array() || t.size() != vals.size() || t.empty()) {
        bad(field, "'t' and 'values' must be non-empty arrays of equal length");
    }
    std::vector<double> ts;
    std::vector<double> vs;
    for (std::size_t i = 0; i < t.size(); ++i) {
        ts.push_back(number(t[i], field + ".t[" + std::to_string(i) + "]"));
        vs.push_back(number(vals[i], field + ".values[" + std::to_string(i) + "]"));
    }
    try {
        return weyl::Coupling::tabulated(ts, vs);
    } catch (const std::exception& e) {
        bad(field, e.what());
    }
}

geometry::ClosedCurve parse_curve(const json& g, const fs::path& base) {
    const std::string type = text(require(g, "type", "geometry."), "geometry.type");
    if (type == "circle") {
        return geometry::Circle{g.contains("radius") ? positive(g["radius"], "geometry.radius") : 1.0};
    }
    if (type == "ellipse") {
        return geometry::Ellipse{positive(require(g, "a", "geometry."), "geometry.a"),
                                 positive(require(g, "b", "geometry."), "geometry.b")};
    }
    if (type == "kite") return geometry::Kite{};
    if (type == "tabulated") {
        fs::path p = text(require(g, "path", "geometry."), "geometry.path");
        if (p.is_relative() && !base.empty()) p = base / p;
        try {
            return geometry::load_tabulated(p.string());
        } catch (const std::exception& e) {
            bad("geometry.path", e.what());
        }
    }
    bad("geometry.type", "unknown curve '" + type + "' (circle, ellipse, kite, tabulated)");
}

weyl::Condition parse_condition(const json& b) {
    const std::string type = text(require(b, "type", "bc."), "bc.type");
    if (type == "dirichlet") return weyl::Dirichlet{};
    if (type == "neumann") return weyl::Neumann{};
    if (type == "robin") {
        return weyl::Robin{coupling(require(b, "b_minus", "bc."), "bc.b_minus"),
                           coupling(require(b, "b_plus", "bc."), "bc.b_plus")};
    }
    if (type == "delta") return weyl::Delta{coupling(require(b, "alpha", "bc."), "bc.alpha")};
    if (type == "delta_prime") return weyl::DeltaPrime{coupling(require(b, "beta", "bc."), "bc.beta")};
    bad("bc.type", "unknown condition '" + type + "' (dirichlet, neumann, robin, delta, delta_prime)");
}

std::vector<double> parse_k(const json& v) {
    if (v.is_number()) return {positive(v, "k")};
    if (!v.is_object()) bad("k", "expected a number or {\"k_min\", \"k_max\", \"count\"}");
    const double lo = positive(require(v, "k_min", "k."), "k.k_min");
    const double hi = positive(require(v, "k_max", "k."), "k.k_max");
    const int n = positive_int(require(v, "count", "k."), "k.count");
    if (hi < lo) bad("k.k_max", "must not be below k_min");
    if (n == 1 && hi != lo) bad("k.count", "a single value needs k_min == k_max");
    std::vector<double> ks(n);
    for (int i = 0; i < n; ++i) ks[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return ks;
}

FieldSpec parse_field(const json& f) {
    FieldSpec spec;
    if (f.contains("incident")) spec.incident = number(f["incident"], "field.incident");
    const bool has_points = f.contains("points");
    const bool has_grid = f.contains("grid");
    if (has_points == has_grid) bad("field", "give exactly one of 'points' or 'grid'");
    if (has_points) {
        const auto& p = f["points"];
        if (!p.is_array() || p.empty()) bad("field.points", "expected a non-empty array of [x, y]");
        for (std::size_t i = 0; i < p.size(); ++i) {
            spec.points.push_back(point(p[i], "field.points[" + std::to_string(i) + "]"));
        }
    } else {
        const auto& g = f["grid"];
        const double x0 = number(require(g, "x_min", "field.grid."), "field.grid.x_min");
        const double x1 = number(require(g, "x_max", "field.grid."), "field.grid.x_max");
        const double y0 = number(require(g, "y_min", "field.grid."), "field.grid.y_min");
        const double y1 = number(require(g, "y_max", "field.grid."), "field.grid.y_max");
        const int nx = positive_int(require(g, "nx", "field.grid."), "field.grid.nx");
        const int ny = positive_int(require(g, "ny", "field.grid."), "field.grid.ny");
        if (static_cast<long long>(nx) * ny > 4'000'000) bad("field.grid", "more than 4e6 points");
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                spec.points.push_back({nx == 1 ? x0 : x0 + (x1 - x0) * i / (nx - 1),
                                       ny == 1 ? y0 : y0 + (y1 - y0) * j / (ny - 1)});
            }
        }
    }
    return spec;
}

ResolventSpec parse_resolvent(const json& r) {
    ResolventSpec spec;
    spec.x = point(require(r, "x", "resolvent."), "resolvent.x");
    spec.y0 = point(require(r, "y0", "resolvent."), "resolvent.y0");
    if (r.contains("epsilons")) {
        const auto& e = r["epsilons"];
        if (!e.is_array() || e.empty()) bad("resolvent.epsilons", "expected a non-empty array");
        spec.epsilons.clear();
        for (std::size_t i = 0; i < e.size(); ++i) {
            spec.epsilons.push_back(positive(e[i], "resolvent.epsilons[" + std::to_string(i) + "]"));
        }
    }
    if (geometry::norm(spec.x - spec.y0) == 0.0) bad("resolvent", "x and y0 must differ");
    return spec;
}

}  // namespace

RunConfig parse_config_text(const std::string& content, const fs::path& base_dir) {
    RunConfig cfg;
    try {
        cfg.echo = json::parse(content);
    } catch (const json::parse_error& e) {
        // The library message carries the line and column of the failure.
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    const json& doc = cfg.echo;
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    static const std::vector<std::string> known = {"geometry", "bc",      "k",       "N",        "M",
                                                   "branch",   "output",  "threads", "field",    "resolvent"};
    for (const auto& [key, _] : doc.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) bad(key, "unknown field");
    }

    const json& g = require(doc, "geometry", "");
    cfg.curve = parse_curve(g, base_dir);
    try {
        geometry::validate(cfg.curve);
    } catch (const std::exception& e) {
        bad("geometry", e.what());
    }
    if (g.contains("arc")) {
        const auto& a = g["arc"];
        const double t0 = number(require(a, "t0", "geometry.arc."), "geometry.arc.t0");
        const double t1 = number(require(a, "t1", "geometry.arc."), "geometry.arc.t1");
        if (!(t1 > t0) || t1 - t0 >= 2.0 * specfun::kPi) bad("geometry.arc", "need t0 < t1 < t0 + 2*pi");
        cfg.arc = geometry::ArcSpec{cfg.curve, t0, t1};
    }

    cfg.bc.condition = parse_condition(require(doc, "bc", ""));
    if (cfg.arc) cfg.bc.support = *cfg.arc;
    cfg.k = parse_k(require(doc, "k", ""));
    if (doc.contains("N")) cfg.N = positive_int(doc["N"], "N");
    if (doc.contains("M")) cfg.M = positive_int(doc["M"], "M");
    if (cfg.N < 4) bad("N", "must be at least 4");
    if (cfg.M % 2 != 0) bad("M", "must be even");
    if (doc.contains("branch")) {
        const std::string b = text(doc["branch"], "branch");
        if (b == "minus") {
            cfg.branch = specfun::Branch::Minus;
        } else if (b == "plus") {
            cfg.branch = specfun::Branch::Plus;
        } else {
            bad("branch", "expected 'minus' or 'plus'");
        }
    }
    if (doc.contains("output")) cfg.output = text(doc["output"], "output");
    if (doc.contains("threads")) cfg.threads = positive_int(doc["threads"], "threads");
    if (doc.contains("field")) cfg.field = parse_field(doc["field"]);
    if (doc.contains("resolvent")) cfg.resolvent = parse_resolvent(doc["resolvent"]);

    // Parameter constraints of the solver, checked once on a small grid so
    // errors surface before any heavy work.
    try {
        auto probe = cfg;
        probe.N = 8;
        weyl::assemble_weyl(cfg.bc, specfun::LimitBranch{cfg.k.front(), cfg.branch}, make_grid(probe));
    } catch (const weyl::InvalidCondition& e) {
        bad("bc", e.what());
    } catch (const weyl::SingularSystemError&) {
        // Resonances are a numerical outcome, reported by the command itself.
    }
    return cfg;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.parent_path());
}

geometry::BoundaryGrid make_grid(const RunConfig& cfg) {
    if (cfg.arc) return geometry::build_arc_grid(*cfg.arc, cfg.N);
    return geometry::build_grid(cfg.curve, cfg.N);
}

}  // namespace weylscat::cli
