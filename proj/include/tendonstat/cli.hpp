#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tendonstat::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInvalid = 2, kNotConverged = 3 };

/// Runs one command line. args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace tendonstat::cli
