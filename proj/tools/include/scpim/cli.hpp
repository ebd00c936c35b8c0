#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace scpim::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kDomain = 3,
    kConfig = 4,
    kIo = 5,
};

/// Runs one command line (without the program name). Results go to `out`
/// unless redirected with --out; failures print one "error: ..." line to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace scpim::cli
