#ifndef CAVNET_CLI_APP_HPP
#define CAVNET_CLI_APP_HPP

#include <ostream>
#include <string>
#include <vector>

namespace cavnet::cli {

enum ExitCode : int {
    kSuccess = 0,
    kConfigError = 1,
    kSolverError = 2,
    kOracleFailure = 3,
};

/// Entry point shared by the executable and the tests. args excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cavnet::cli

#endif  // CAVNET_CLI_APP_HPP
