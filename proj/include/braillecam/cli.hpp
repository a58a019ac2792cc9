#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace braillecam {

// Exit codes of the braillecam tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitDomain = 2,
  kExitVerification = 3,
};

// Runs `braillecam <subcommand> ...`. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace braillecam
