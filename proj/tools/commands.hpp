#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polya::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_io = 1,
    exit_usage = 2,
    exit_resource = 3,
    exit_numeric = 4,
    exit_consistency = 5,
};

/// Parses `args` (without the program name), runs one subcommand and writes
/// the report to `out` or to the --output file. Errors are written to `err`
/// as a JSON object. Returns the process exit status.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace polya::cli
