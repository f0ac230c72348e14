#pragma once

#include <iosfwd>

namespace lexi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Parses argv and dispatches one subcommand. Reports go to `out` unless
// --report names a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lexi::cli
