#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace machina::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

/// Runs the command line `args` (without the program name). Never throws;
/// errors are reported on `err` and mapped to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace machina::cli
