#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kq {

// Exit codes: 0 success / all properties pass, 1 a property failed or an
// interpolation is impossible, 2 usage or validation error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one CLI invocation. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace kq
