#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

namespace weylscat::cli {

int run(int argc, char** argv) {
    CLI::App app{"Scattering by curves with boundary and interface conditions"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--config", opt.config, "JSON run configuration");
    app.add_option("--out", opt.out, "output directory (overrides 'output' in the config)");
    app.add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", opt.quiet, "only print failures and summaries");

    auto* farfield = app.add_subcommand("farfield", "scattering amplitude on M directions")->fallthrough();
    auto* smatrix = app.add_subcommand("smatrix", "scattering matrix and its unitarity residual")->fallthrough();
    auto* field = app.add_subcommand("field", "total field u+ at sample points")->fallthrough();
    auto* resolvent = app.add_subcommand("resolvent", "resolvent kernel across an eps sweep")->fallthrough();
    auto* validate = app.add_subcommand("validate", "run the self-check suite")->fallthrough();
    std::string level = "quick";
    validate->add_option("level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*farfield) return cmd_farfield(opt);
        if (*smatrix) return cmd_smatrix(opt);
        if (*field) return cmd_field(opt);
        if (*resolvent) return cmd_resolvent(opt);
        if (*validate) return cmd_validate(level, opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const weyl::SingularSystemError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kConfigError;
}

}  // namespace weylscat::cli

int main(int argc, char** argv) { return weylscat::cli::run(argc, argv); }
