#pragma once

#include <iosfwd>

namespace perturb::cli {

enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitMath = 2 };

// Parses argv and dispatches to the subcommands invert, fit, pca, fa and
// reproduce-gallant. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, bool stdout_is_terminal);

}  // namespace perturb::cli
