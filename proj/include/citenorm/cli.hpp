#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace citenorm::cli {

inline constexpr const char* tool_version = "1.0.0";

enum ExitCode : int { success = 0, warnings = 1, fatal = 2 };

/// Runs one invocation. args excludes the program name. Progress and
/// diagnostics go to err; tables are written under --out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace citenorm::cli
