#ifndef FUZZYCLIN_TOOLS_CLI_HPP_
#define FUZZYCLIN_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace fuzzyclin::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;        // diagnostics found / agreement below threshold
inline constexpr int kExitNotFound = 2;      // unknown disease, unreadable or unloadable input
inline constexpr int kExitBadInput = 3;      // missing or unparseable input value

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Fixed 4-decimal rendering used for every human-readable number.
std::string fixed4(double v);

}  // namespace fuzzyclin::cli

#endif  // FUZZYCLIN_TOOLS_CLI_HPP_
