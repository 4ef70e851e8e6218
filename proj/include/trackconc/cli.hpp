#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace trackconc {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitEmptyResult = 3;

// Runs one CLI invocation. `args` is the command line without the program
// name ({"metrics", "--kb", ...}). Data goes to `out` (or the --out file),
// diagnostics to `err`. Never throws; failures map onto the exit codes
// above.
int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err);

}  // namespace trackconc
