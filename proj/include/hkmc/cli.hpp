#pragma once

#include <string>
#include <vector>

namespace hkmc {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

const std::vector<std::string>& cli_subcommands();

/// Entry point of the `hkmc` tool. Returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace hkmc
