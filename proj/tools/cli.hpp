#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mqf {

// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitCheckFailed = 2, kExitNumeric = 3 };

// Runs the CLI with argv[1..] in `args`, writing human text to `out` and
// diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mqf
