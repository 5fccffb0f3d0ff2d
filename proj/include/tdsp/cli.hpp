#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tdsp {

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable consulted for --seed when the flag is absent.
inline constexpr const char* kSeedEnvVar = "TDSP_SEED";

/// Runs the `tdsp` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tdsp
