#pragma once

#include <ostream>

namespace sudler::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kPrecision = 3;

// Runs the `sudler` command line. Results go to `out` (or the --output
// file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sudler::cli
