#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sobnum {

// Run the command-line interface on already-split arguments (no argv[0]).
// Writes results to out and diagnostics to err. Returns the process exit
// code: 0 success / certification pass, 1 certification failure, 2 usage or
// domain error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sobnum
