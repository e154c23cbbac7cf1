#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lrpd::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kSolverFailure = 2,
    kInvariantViolated = 3,
};

/// Runs the command line `args` (without the program name). Results go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrpd::cli
