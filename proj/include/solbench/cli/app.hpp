#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace solbench::cli {

enum class ExitStatus : int {
  ok = 0,             // success, no unsuppressed misuse
  misuse_found = 1,   // success with at least one unsuppressed misuse
  usage_error = 2,    // bad flags, missing inputs or configuration
  io_error = 3,       // I/O or transport failure
};

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

/// Reads the process environment.
[[nodiscard]] std::optional<std::string> process_env(std::string_view name);

/// `args` excludes the program name: {"scan", "contracts/", "--format", "json"}.
[[nodiscard]] ExitStatus run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                             const EnvLookup& env = process_env);

}  // namespace solbench::cli
