#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hopf {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Dispatches `validate`, `convert`, `simulate`, `search` and `report`.
/// `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace hopf
