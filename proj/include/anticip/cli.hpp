#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace anticip {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // verification or oracle mismatch
inline constexpr int kExitUsage = 2;    // bad flags or configuration

// Runs one command line (without the program name). Results go to `out`
// unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace anticip
