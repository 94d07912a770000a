#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cl3 {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitCache = 3 };

/// Parses args (program name excluded), runs one subcommand, returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cl3
