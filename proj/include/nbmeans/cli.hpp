#pragma once

#include <ostream>

namespace nbmeans {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitInputError = 2,
    kExitDegenerate = 3,
    kExitRuntimeError = 4,
};

/// Entry point of the `nbmeans` command (subcommands analyze, simulate,
/// report). Writes reports to `out` and diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace nbmeans
