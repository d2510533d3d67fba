#pragma once

// argv-style entry point shared by the real binary and the tests; args
// excludes the program name.  Returns the process exit code:
//   0  success (including --help)
//   1  bad input, infeasible request, or a verification battery that ran
//      but failed its thresholds
//   2  internal error

#include <string>
#include <vector>

namespace ppc {

int run_cli(std::vector<std::string> args);

}  // namespace ppc
