#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "trudlab/io.hpp"

namespace trudlab::cli {

/// Stable across commands.
enum ExitCode : int { Success = 0, AssertionFailure = 1, UsageError = 2 };

/// Unknown key, wrong value type or a missing required value.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Runs one command. `args` excludes the program name. Never throws; returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Resolved configuration for a command ("verify", "eigen", "solve", "experiment")
/// from defaults, then the file object, then flag strings. `name` selects the
/// experiment and is ignored otherwise.
Json resolve_config(const std::string& command, const std::string& name, const Json& file,
                    const std::vector<std::pair<std::string, std::string>>& flags);

}  // namespace trudlab::cli
