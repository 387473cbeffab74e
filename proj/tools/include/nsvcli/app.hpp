#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nsvcli/verify.hpp"

namespace nsvcli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;   ///< parse error, unknown suite, bad config
inline constexpr int kExitSolver = 2;  ///< solver failure; manifest still written

/// Entry point behind the nsv executable.  `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const SuiteHooks& hooks = {});

}  // namespace nsvcli
