#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ntbench::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kParameterError = 2;
inline constexpr int kBudgetExceeded = 3;
inline constexpr int kInvariantViolation = 4;

/// Runs one subcommand. `args` excludes the program name. Results go to `out`
/// (or the --output file), diagnostics to `err`; the return value is the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ntbench::cli
