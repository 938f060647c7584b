#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geosub::cli {

/// Exit codes: 0 success, 1 error (including failed verification), 2 refusal.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRefusal = 2;

/// Runs `geosub <args...>`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geosub::cli
