#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gmc {

// Exit codes of the gmc tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitInvariant = 3,
  kExitResource = 4,
  kExitInternal = 5,
};

// Environment variable naming a config file (overridden by --config).
inline constexpr const char* kConfigEnvVar = "GMC_CONFIG";

// Runs the tool; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gmc
