#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ltvcomm::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kSuccess = 0,
    kCheckFailed = 1,
    kUsageError = 2,
};

/// Runs the ltvcomm command line. args excludes the program name. Machine
/// output (JSON, or CSV when simulate has no -o) goes to out, human-readable
/// summaries and diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ltvcomm::cli
