#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rbb {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitHypothesis = 2,
  kExitResourceCap = 3,
};

// args excludes the program name. Report summaries go to `out`, error
// messages to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace rbb
