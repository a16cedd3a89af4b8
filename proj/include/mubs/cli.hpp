#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mubs {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,
    kExitCheckFailed = 2,
    kExitFormat = 3,
    kExitInadmissible = 4,
    kExitBudget = 5,  // search stopped by its budget; a resume token was written
};

/// Runs the `mubs` command line. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mubs
