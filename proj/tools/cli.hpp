#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pham::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2, kDegenerate = 3, kNumeric = 4 };

/// Runs one invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pham::cli
