#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace psdorder::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: the relation holds / operation succeeded, it fails, or the invocation was unusable.
enum ExitCode : int { kHolds = 0, kFails = 1, kUsage = 2 };

/**
 * Runs one command line (without the program name). Verdicts are written to
 * `out` as JSON; diagnostics and warnings go to `err` only.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace psdorder::cli
