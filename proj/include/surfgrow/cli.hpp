#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace surfgrow {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitGateFailed = 2 };

/// Entry point of the command-line tool; argv[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace surfgrow
