#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qkdlab::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kVerifyFailed = 3, kIoError = 4 };

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --out is given; diagnostics go to `err`.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qkdlab::cli
