#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace malpha::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kInvalidInput = 2;
inline constexpr int kExhausted = 3;
inline constexpr int kBudget = 4;

// Runs the command line `args` (without the program name). Tables go to
// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace malpha::cli
