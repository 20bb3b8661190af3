#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace plp {

/// Exit code when --oracle-check finds a disagreement.
inline constexpr int kOracleMismatchExit = 6;

/// Runs the command line `args` (without the program name). Returns the exit
/// code; results go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plp
