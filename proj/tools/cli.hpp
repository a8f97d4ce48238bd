#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace canbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

/// Parses `args` (without the program name) and dispatches a subcommand.
/// Data goes to `out`, progress and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace canbound::cli
