#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace driftwalk {

/// Full command-line entry point, separated from main() so tests can drive
/// it with string streams.  `args` excludes the program name.  Returns the
/// process exit code: 0 success, 2 bad arguments, 1 internal failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace driftwalk
