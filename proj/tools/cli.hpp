// Command-line front end. run() parses argv, executes one subcommand and
// writes its document to `out` (or to --output); diagnostics go to `err`.

#ifndef PTEXP_TOOLS_CLI_HPP
#define PTEXP_TOOLS_CLI_HPP

#include <ostream>

namespace ptexp::cli {

enum ExitCode : int { kOk = 0, kSelftestFailed = 1, kInvalidArguments = 2, kNumericalFailure = 3 };

inline constexpr const char* kToolVersion = "0.1.0";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ptexp::cli

#endif
