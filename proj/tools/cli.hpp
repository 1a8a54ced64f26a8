#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace concord::cli {

// Runs one command line (argv without the program name) and returns the
// process exit code:
//   0  success
//   1  usage, validation, parse or I/O failure
//   2  a relation cannot be completed from its known cells
//   3  optimisation finished below the acceptance threshold (the report is
//      still written)
// The streams exist so tests can capture output; main() passes std::cout
// and std::cerr.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

int dispatch(const std::vector<std::string>& args);

}  // namespace concord::cli
