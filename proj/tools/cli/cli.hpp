#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace indeval::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (program name excluded). JSON/CSV payloads go to
/// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "start:stop:step" (stop included when reached within 1e-9) or a comma
/// list. Every value must lie in [0, 1]. Throws std::invalid_argument.
[[nodiscard]] std::vector<double> parse_pi_grid(std::string_view text);

/// Writes `contents` to a temporary file next to `path`, then renames it into
/// place. Throws indeval::Error if the file cannot be written.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace indeval::cli
