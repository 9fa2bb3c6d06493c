#pragma once

#include <iosfwd>
#include <string>

namespace shellflow {

/// Exit codes of run_command.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNumeric = 2,
  kExitShock = 3,
  kExitVerifyFailed = 4,
};

/// Entry point of the command-line front end. Data goes to --out when given,
/// otherwise to `out`; diagnostics go to `err`.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Locale-free 17-significant-digit rendering used by all CSV output.
std::string format_number(double v);

}  // namespace shellflow
