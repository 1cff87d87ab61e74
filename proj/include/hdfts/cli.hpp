#pragma once

#include <string>
#include <vector>

namespace hdfts::cli {

// Run one CLI invocation. args excludes the program name (argv[1..]).
// Returns the process exit code: 0 on success, 2 on any error, with a
// single "code: message" line on stderr.
int run(const std::vector<std::string>& args);

}  // namespace hdfts::cli
