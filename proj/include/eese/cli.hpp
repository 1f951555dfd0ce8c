#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eese {

/// Exit codes of the command-line front end.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_numerical = 2 };

/// Entry point shared by the `eese` executable and the tests. `args` excludes
/// the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace eese
