#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pockets::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTolerance = 3;  // `compare` exceeded --tol

/// Runs one subcommand. `args` excludes the program name. Results go to `out`
/// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pockets::cli
