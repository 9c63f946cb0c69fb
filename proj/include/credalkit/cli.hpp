#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace credalkit::cli {

inline constexpr const char* tool_version = "credalkit 0.1.0";

enum ExitCode : int {
  exit_pass = 0,
  /// Inconsistent family, failed representation, empty joint set.
  exit_failure = 1,
  exit_input_error = 2,
  exit_cap_exceeded = 3,
  /// A bug: an internal check tripped.
  exit_internal_error = 4,
};

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace credalkit::cli
