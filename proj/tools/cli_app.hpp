#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace coolmap::cli {

// Exit codes shared by every subcommand.
enum Exit : int {
    kOk = 0,
    kFoundViolations = 1,
    kInputError = 2,
    kInfeasible = 3,
    kStructural = 4,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace coolmap::cli
