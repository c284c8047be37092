#ifndef WCLUSTER_CLI_APP_HPP
#define WCLUSTER_CLI_APP_HPP

#include <ostream>
#include <string>
#include <vector>

namespace wcluster::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kInputError = 2,
    kConfigError = 3,
    kNumericalError = 4,
};

/// Runs the command line `args` (without the program name) and returns the
/// exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wcluster::cli

#endif  // WCLUSTER_CLI_APP_HPP
