#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tskfit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one `tskfit <subcommand> ...` invocation. `args` excludes the program
// name. Results go to `out`; progress and diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tskfit::cli
