#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curveflat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one subcommand. args excludes the program name. Diagnostics and the
// machine-readable error object go to `err`; summaries go to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace curveflat::cli
