#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace beiterlab::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kNotFound = 3,
  kCheckFailed = 4,
};

/// Runs one command line (without the program name). CSV goes to `out` unless
/// --out is given; diagnostics, summaries and the run manifest go to `err`
/// unless redirected with --manifest.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace beiterlab::cli
