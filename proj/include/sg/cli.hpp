#pragma once

#include <ostream>

namespace sg {

/// Exit codes: 0 success, 1 validation or I/O error, 2 verification failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitVerifyFailed = 2;

/// `sg constants|density|trajectories|ensemble|verify [options]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace sg
