#pragma once

#include <ostream>

namespace biharm::experiments {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

/// Entry point of the `biharm` command. Reports go to `out`, diagnostics
/// and timings to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace biharm::experiments
