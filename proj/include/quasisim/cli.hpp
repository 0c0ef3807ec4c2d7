#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quasisim::cli {

// Exit codes: 0 success, 2 usage or parse error, 3 simulation failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitProtocolFailure = 3;

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quasisim::cli
