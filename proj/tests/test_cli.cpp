#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

using namespace weylscat;
using namespace weylscat::cli;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

int run_tool(const std::string& args, const std::string& env = {}) {
    const std::string cmd = env + (env.empty() ? "" : " ") + std::string(WEYLSCAT_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("weylscat_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

const char* kBase = R"({"geometry": {"type": "circle"}, "bc": {"type": "dirichlet"}, "k": 2.0, "N": 32, "M": 8})";

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse_config_text(
        R"({"geometry": {"type": "kite", "arc": {"t0": 0.5, "t1": 2.0}},
            "bc": {"type": "robin", "b_minus": 1, "b_plus": {"t": [0, 3], "values": [-1, -2]}},
            "k": {"k_min": 1, "k_max": 2, "count": 3}, "N": 40, "M": 16, "branch": "plus", "threads": 2})");
    CHECK(cfg.k == std::vector<double>{1.0, 1.5, 2.0});
    CHECK(cfg.arc.has_value());
    CHECK(cfg.N == 40);
    CHECK(cfg.branch == specfun::Branch::Plus);
    CHECK(std::holds_alternative<geometry::ArcSpec>(cfg.bc.support));
    CHECK(make_grid(cfg).kind == geometry::GridKind::Arc);
}

TEST_CASE("config errors name the field or the line") {
    CHECK(contains(error_of(R"({"geometry": {"type": "circle"}, "k": 2})"), "'bc'"));
    CHECK(contains(error_of(R"({"geometry": {"type": "blob"}, "bc": {"type": "dirichlet"}, "k": 2})"),
                   "geometry.type"));
    CHECK(contains(error_of(R"({"geometry": {"type": "circle", "radius": -1}, "bc": {"type": "dirichlet"}, "k": 2})"),
                   "geometry.radius"));
    CHECK(contains(error_of(R"({"geometry": {"type": "circle"}, "bc": {"type": "delta"}, "k": 2})"), "bc.alpha"));
    CHECK(contains(error_of(R"({"geometry": {"type": "circle"}, "bc": {"type": "dirichlet"}, "k": -2})"), "'k'"));
    CHECK(contains(error_of(R"({"geometry": {"type": "circle"}, "bc": {"type": "dirichlet"}, "k": 2, "M": 7})"),
                   "'M'"));
    CHECK(contains(error_of(R"({"geometry": {"type": "circle"}, "bc": {"type": "dirichlet"}, "k": 2, "x": 1})"),
                   "'x'"));
    CHECK(contains(error_of(R"({"geometry": {"type": "circle"}, "bc": {"type": "robin", "b_minus": 1, "b_plus": 1},
                               "k": 2})"),
                   "'bc'"));
    CHECK(contains(error_of("{\n\"geometry\": {\"type\": \"circle\"},\n\"bc\": }"), "line 3"));
}

TEST_CASE("number formatting") {
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(1.0 / 3.0) == "0.333333333333333");
    CHECK(format_real(-0.0) == "0");
    CHECK(format_real(1e-300) == "1e-300");
    CHECK(format_real(std::nan("")) == "nan");
}

TEST_CASE("manifest layout check") {
    json m = {{"command", "farfield"}, {"version", "1"}, {"config", json::object()},
              {"convention", {{"argument_order", "a"}, {"normalization", "b"}}},
              {"runs", {{{"file", "farfield.csv"}}}}, {"files", {"farfield.csv"}},
              {"timings", json::object()}, {"checks", json::array()}};
    CHECK(manifest_problems(m).empty());
    m["files"] = json::array();
    CHECK_FALSE(manifest_problems(m).empty());
    m.erase("runs");
    CHECK_FALSE(manifest_problems(m).empty());
}

TEST_CASE("farfield output matches the golden fixture") {
    const fs::path golden = WEYLSCAT_GOLDEN_DIR;
    const fs::path out = scratch_dir("golden");
    REQUIRE(run_tool("farfield --config " + (golden / "dirichlet_circle_k2.json").string() + " --out " + out.string()) ==
            0);
    const auto got = read_csv(out / "farfield.csv");
    const auto want = read_csv(golden / "dirichlet_circle_k2" / "farfield.csv");
    REQUIRE(got.size() == want.size());
    REQUIRE(got.size() == 64u * 64u);
    double worst = 0.0;
    for (std::size_t r = 0; r < got.size(); ++r) {
        for (std::size_t c = 0; c < 4; ++c) worst = std::max(worst, std::abs(got[r][c] - want[r][c]));
    }
    CHECK(worst <= 1e-8);
    const auto manifest = json::parse(slurp(out / "manifest.json"));
    CHECK(manifest_problems(manifest).empty());
    CHECK(manifest["files"] == json::array({"farfield.csv"}));
    fs::remove_all(out);
}

TEST_CASE("exit codes and the golden guard") {
    const fs::path dir = scratch_dir("codes");
    fs::create_directories(dir);
    const fs::path cfg = dir / "c.json";
    std::ofstream(cfg) << kBase;
    CHECK(run_tool("farfield --config " + cfg.string() + " --out " + (dir / "a").string()) == 0);
    CHECK(run_tool("farfield --config " + (dir / "missing.json").string() + " --out " + (dir / "b").string()) == 2);
    CHECK(run_tool("nonsense") == 2);
    // The directory already holds c.json, so seeding must refuse.
    CHECK(run_tool("farfield --config " + cfg.string() + " --out " + dir.string(), "WEYL_SCATTER_SEED_GOLDEN=1") == 2);
    CHECK(run_tool("field --config " + cfg.string() + " --out " + (dir / "c").string()) == 2);
    fs::remove_all(dir);
}

TEST_CASE("sweeps, zero coupling and the other commands") {
    const fs::path dir = scratch_dir("sweep");
    fs::create_directories(dir);
    const fs::path cfg = dir / "c.json";
    std::ofstream(cfg) << R"({"geometry": {"type": "kite"}, "bc": {"type": "delta", "alpha": 0},
        "k": {"k_min": 1, "k_max": 3, "count": 3}, "N": 32, "M": 8})";
    REQUIRE(run_tool("farfield --config " + cfg.string() + " --out " + (dir / "ff").string() + " --threads 2") == 0);
    for (const char* f : {"farfield_000.csv", "farfield_001.csv", "farfield_002.csv"}) {
        for (const auto& row : read_csv(dir / "ff" / f)) {
            CHECK(row[2] == 0.0);
            CHECK(row[3] == 0.0);
        }
    }
    const auto m = json::parse(slurp(dir / "ff" / "manifest.json"));
    CHECK(m["files"].size() == 3);
    CHECK(m["runs"].size() == 3);

    REQUIRE(run_tool("smatrix --config " + cfg.string() + " --out " + (dir / "sm").string()) == 0);
    for (const auto& row : read_csv(dir / "sm" / "smatrix_001.csv")) {
        CHECK(row[2] == (row[0] == row[1] ? 1.0 : 0.0));
        CHECK(row[3] == 0.0);
    }

    const fs::path fcfg = dir / "f.json";
    std::ofstream(fcfg) << R"({"geometry": {"type": "circle"}, "bc": {"type": "neumann"}, "k": 2, "N": 64, "M": 8,
        "field": {"grid": {"x_min": -2, "x_max": 2, "nx": 5, "y_min": 1.0005, "y_max": 3, "ny": 3}},
        "resolvent": {"x": [2, 0.5], "y0": [-1.2, 1.6], "epsilons": [0.1, 0.01]}})";
    REQUIRE(run_tool("field --config " + fcfg.string() + " --out " + (dir / "fd").string()) == 0);
    const auto field = read_csv(dir / "fd" / "field.csv");
    CHECK(field.size() == 15);
    int masked = 0;
    for (const auto& row : field) masked += row[4] == 1.0 ? 1 : 0;
    CHECK(masked >= 1);
    const auto fm = json::parse(slurp(dir / "fd" / "manifest.json"));
    CHECK(fm["helmholtz_spot_check"]["relative_residual"].get<double>() <= 1e-5);

    REQUIRE(run_tool("resolvent --config " + fcfg.string() + " --out " + (dir / "rs").string()) == 0);
    CHECK(read_csv(dir / "rs" / "resolvent.csv").size() == 3);
    const auto rm = json::parse(slurp(dir / "rs" / "manifest.json"));
    CHECK(rm["eps_sweep_monotone"].get<bool>());
    CHECK(rm["checks"][0]["pass"].get<bool>());
    fs::remove_all(dir);
}
