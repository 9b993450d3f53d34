#pragma once

// Command-line front end. Kept as a library so the tests can drive it
// without spawning processes.

#include <ostream>
#include <string>
#include <vector>

namespace lpspec::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name. Documents go to --out (written via a
// temporary file and a rename) or to `out`; diagnostics go to `err` as one
// JSON line {"error": {"code": ..., "message": ...}}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lpspec::cli
