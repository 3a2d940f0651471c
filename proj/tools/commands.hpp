#ifndef ABSA_TOOLS_COMMANDS_HPP_
#define ABSA_TOOLS_COMMANDS_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace absa::cli {

// Process exit codes; stable for CI.
enum ExitCode : int {
  kOk = 0,
  kEvaluationFailure = 1,  // validation violations, failed comparison, bad ids
  kInputError = 2,         // unreadable or unparseable input, bad flags
  kBackendFailure = 3,     // backend unavailable, missing fixture
};

// Runs `absa <subcommand> ...`. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace absa::cli

#endif  // ABSA_TOOLS_COMMANDS_HPP_
