#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace trikurve::cli {

// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSpaceFormDegenerate = 3;
inline constexpr int kExitNumerical = 4;

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

std::optional<std::string> system_env(const std::string& name);

// Runs one command (args exclude the program name). Option values are taken
// from, in order of precedence: the command line, TRIKURVE_<NAME> environment
// variables (upper case, dashes as underscores), the `key = value` file named
// by --config, then built-in defaults.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env = system_env);

}  // namespace trikurve::cli
