#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace depthlab {

// Parses and executes one CLI invocation (argv without the program name).
// Results go to `out` unless --out redirects them to a file; diagnostics
// go to `err`. Returns the process exit code: 0 success, 1 runtime error,
// 2 usage error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace depthlab
