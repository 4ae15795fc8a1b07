#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mbar::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDomain = 3, kCache = 4 };

/// Runs one command line (args excludes the program name). Results go to
/// `out`, diagnostics to `err`. Returns the process exit status.
int parse_and_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mbar::cli
