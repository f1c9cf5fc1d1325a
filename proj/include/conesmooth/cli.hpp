#pragma once

#include <iosfwd>

namespace conesmooth::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `conesmooth` tool; returns the process exit code.
/// Subcommands: build-profile, verify, collapse, obstruction.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace conesmooth::cli
