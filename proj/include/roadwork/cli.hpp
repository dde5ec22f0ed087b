#pragma once

#include <string>
#include <vector>

namespace roadwork::cli {

// Exit codes: 0 success, 1 usage, 2 configuration, 3 invalid input,
// 4 runtime failure.
enum ExitCode {
    kOk = 0,
    kUsage = 1,
    kConfig = 2,
    kInput = 3,
    kRuntime = 4,
};

int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, const char* const* argv);

} // namespace roadwork::cli
