#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qeffects {

/// Runs the command line `args` (args[0] is the program name). Output goes to
/// `out` in one piece on success; diagnostics go to `err`.
///
/// Exit codes: 0 success, 1 usage/parse/validation error, 2 a verification
/// failure or an effect that cannot be decomposed.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qeffects
