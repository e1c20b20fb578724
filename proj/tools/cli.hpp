#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gdss::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kFailure = 2 };

/// Runs one subcommand. Data goes to `out` (or the files named by --out),
/// diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, const char* const* argv);

}  // namespace gdss::cli
