#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eposic::cli {

// Full command dispatch; args exclude the program name.
// Exit codes: 0 success, 1 verification failure, 2 invalid flags or input.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace eposic::cli
