#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pullgraph {

// Exit codes: 0 verified / true, 1 hypothesis violated (with witness),
// 2 input or usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitInputError = 2;

// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pullgraph
