#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace amo::app {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // verify found a failing report
inline constexpr int kExitUsage = 2;
inline constexpr int kExitModule = 3;  // a library precondition or limit

// args excludes the program name. Data goes to out (or --out), summaries
// and diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amo::app
