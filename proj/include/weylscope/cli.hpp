#pragma once

#include <string>
#include <vector>

namespace weylscope {

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitRefused = 3 };

int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace weylscope
