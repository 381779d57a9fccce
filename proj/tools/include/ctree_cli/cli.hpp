#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctree::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kParameter = 4 };

/// Runs the command line. argv[0] is the program name. Output files go to
/// --out when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace ctree::cli
