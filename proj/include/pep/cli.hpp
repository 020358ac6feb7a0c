#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitStrict = 4;

// Runs one pepsolve command. `args` excludes the program name. CSV goes to
// --out when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pep::cli
