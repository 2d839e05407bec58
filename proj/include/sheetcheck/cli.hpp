#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sheetcheck::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitLoadFailure = 1;
inline constexpr int kExitBadFlags = 2;

/// Run the command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace sheetcheck::cli
