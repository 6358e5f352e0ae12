#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace carnot::cli {

inline constexpr const char* tool_version = "0.1.0";

enum ExitCode : int { verified = 0, refuted = 1, input_error = 2 };

/// Runs one command line (args excludes the program name). The report goes
/// to `out` (and to --out when given); diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace carnot::cli
