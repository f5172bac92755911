#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace algmech {

/// Command-line front end on already-split arguments (program name
/// excluded).  Regular output goes to `out`, diagnostics to `err`.
///
/// Exit codes: 0 success, 1 failed verification, 2 configuration or parse
/// problem, 3 runtime mathematical failure (singular solve, domain error).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace algmech
