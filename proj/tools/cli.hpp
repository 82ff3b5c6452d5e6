#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cmlab::cli {

enum ExitCode : int { kOk = 0, kVerificationFailure = 1, kUsageError = 2 };

/// Runs one cm_lab invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cmlab::cli
