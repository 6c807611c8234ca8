#ifndef GOU_CLI_HPP
#define GOU_CLI_HPP

#include <string>

#include "gou/config.hpp"

namespace gou {

/// Exit-code contract of the tool: 0 success, 1 configuration error,
/// 2 condition gate (A/B/C not verified and no --force), 3 numerical
/// failure (no root, insufficient ruins, ...).
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitConditionGate = 2,
    kExitNumerical = 3,
};

/// Runs one command against a parsed config, writing output files and the
/// run manifest into the output directory. Returns the exit code and never
/// throws: errors are reported on stderr and mapped per the contract above.
int run_command(const std::string& command, const RunConfig& config,
                bool force, const std::string& out_override = "");

} // namespace gou

#endif
