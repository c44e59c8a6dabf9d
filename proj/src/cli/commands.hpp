#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ggd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitVerifyFailed = 3;

// Runs one invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ggd::cli
