#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace streamclique::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one subcommand. `args` excludes the program name. Output files go to
/// --out-dir; `out` only receives --help text, `err` every diagnostic.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace streamclique::cli
