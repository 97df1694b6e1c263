#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace depord::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kDegenerate = 3 };

/// Runs the command line `args` (without the program name), writing the report
/// to `out` and diagnostics to `err`. Returns one of ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace depord::cli
