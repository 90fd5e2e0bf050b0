#pragma once

#include <iosfwd>

namespace kss::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kUsage = 2, kNumerical = 3 };

/// Entry point of the kss command; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace kss::cli
