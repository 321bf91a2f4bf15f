/// @file cli.hpp
/// @brief The `tcflow` command line: thresholds, exact, residual, solve, sweep,
/// poincare and energy.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tcflow {

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_nonconvergence = 2, exit_io = 3 };

/// `args` excludes the program name. Normal output goes to `out`, diagnostics
/// to `err`. Files are written only after all inputs have been validated.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv);

}  // namespace tcflow
