#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace u22::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;  // failed claim or domain error
inline constexpr int kExitUsage = 2;

/// Runs the u22lab command line. args[0] is the program name. Reports go to
/// `out` (or to --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace u22::cli
