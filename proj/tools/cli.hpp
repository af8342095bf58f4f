// Command-line front end: configuration, output files and the five commands.
#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "weylscat/geometry.hpp"
#include "weylscat/specfun.hpp"
#include "weylscat/weyl.hpp"

namespace weylscat::cli {

using nlohmann::json;
namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kConfigError = 2, kNumericalFailure = 3 };

/// Raised for malformed or out-of-range configuration. The message names the
/// offending field (e.g. "bc.alpha") or the line and column of a syntax error.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FieldSpec {
    double incident = 0.0;  ///< incidence angle in radians
    std::vector<geometry::Vec2> points;
};

struct ResolventSpec {
    geometry::Vec2 x;
    geometry::Vec2 y0;
    std::vector<double> epsilons{1e-1, 1e-2, 1e-3};
};

struct RunConfig {
    json echo;  ///< the document as read
    geometry::ClosedCurve curve;
    std::optional<geometry::ArcSpec> arc;
    weyl::BoundaryCondition bc;
    std::vector<double> k;
    int N = 256;
    int M = 64;
    specfun::Branch branch = specfun::Branch::Minus;
    std::string output;
    int threads = 1;
    std::optional<FieldSpec> field;
    std::optional<ResolventSpec> resolvent;
};

RunConfig parse_config_text(const std::string& text, const fs::path& base_dir = {});
RunConfig load_config(const fs::path& path);

/// Builds the boundary grid the config describes.
geometry::BoundaryGrid make_grid(const RunConfig& cfg);

/// "%.15g" with the C locale, "nan"/"inf" spelled out.
std::string format_real(double v);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const fs::path& path, const std::string& content);

/// Checks a manifest against the documented layout; returns the problems found.
std::vector<std::string> manifest_problems(const json& manifest);

struct Options {
    std::string config;
    std::string out;
    int threads = 0;  ///< 0 means "use the config value"
    bool quiet = false;
};

int cmd_farfield(const Options& opt);
int cmd_smatrix(const Options& opt);
int cmd_field(const Options& opt);
int cmd_resolvent(const Options& opt);
int cmd_validate(const std::string& level, const Options& opt);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, char** argv);

}  // namespace weylscat::cli
