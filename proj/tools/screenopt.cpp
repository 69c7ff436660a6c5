// screenopt: simulation and threshold optimization for FACS-sorted pooled
// RNAi screens.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "screenopt/commands.hpp"
#include "screenopt/run_config.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> replicates;
    std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "path to the run config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed, "master seed (overrides the config)");
    cmd->add_option("--replicates", args.replicates,
                    "Monte Carlo replicate count (overrides the config)");
    cmd->add_option("--out", args.out, "output path (overrides the config)");
}

screenopt::CommandOverrides overrides(const CommonArgs& args) {
    return {args.seed, args.replicates, args.out};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discovery-probability curves, simulation and FACS threshold "
                 "optimization for pooled RNAi screens"};
    app.require_subcommand(1);

    CommonArgs curve_args, optimize_args, simulate_args, compare_args;
    CLI::App* curve = app.add_subcommand(
        "curve", "write the discovery-probability curve over a threshold grid (CSV)");
    add_common(curve, curve_args);
    CLI::App* optimize = app.add_subcommand(
        "optimize", "find the optimal selection threshold(s) (JSON report)");
    add_common(optimize, optimize_args);
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Monte Carlo estimate of the discovery probability (JSON)");
    add_common(simulate, simulate_args);
    CLI::App* compare = app.add_subcommand(
        "compare-stages", "single-stage vs two-stage discovery curves (CSV)");
    add_common(compare, compare_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (curve->parsed()) {
            auto cfg = screenopt::parse_run_config(curve_args.config_path);
            return screenopt::cmd_curve(cfg, overrides(curve_args));
        }
        if (optimize->parsed()) {
            auto cfg = screenopt::parse_run_config(optimize_args.config_path);
            return screenopt::cmd_optimize(cfg, overrides(optimize_args));
        }
        if (simulate->parsed()) {
            auto cfg = screenopt::parse_run_config(simulate_args.config_path);
            return screenopt::cmd_simulate(cfg, overrides(simulate_args));
        }
        if (compare->parsed()) {
            auto cfg = screenopt::parse_run_config(compare_args.config_path);
            return screenopt::cmd_compare_stages(cfg, overrides(compare_args));
        }
    } catch (const screenopt::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 1;
}
