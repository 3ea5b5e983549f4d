#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mopctl {

enum ExitCode : int {
  exit_ok = 0,
  exit_config = 2,
  exit_not_converged = 3,
  exit_degenerate = 4,
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mopctl
