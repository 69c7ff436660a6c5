// Command entry points shared by the CLI binary and by tests.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "screenopt/run_config.hpp"

namespace screenopt {

/// Command-line overrides applied on top of the parsed config.
struct CommandOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> replicates;
    std::optional<std::string> out;
};

/// Each command returns 0 after writing all requested outputs. Config and
/// I/O problems throw; an infeasible W1 budget makes cmd_optimize and
/// cmd_compare_stages emit a structured error object on stdout and return
/// a non-zero status.
int cmd_curve(const RunConfig& config, const CommandOverrides& overrides = {});
int cmd_simulate(const RunConfig& config, const CommandOverrides& overrides = {});
int cmd_optimize(const RunConfig& config, const CommandOverrides& overrides = {});
int cmd_compare_stages(const RunConfig& config, const CommandOverrides& overrides = {});

}  // namespace screenopt
