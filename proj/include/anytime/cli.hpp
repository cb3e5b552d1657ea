#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace anytime {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertionFailed = 1;
inline constexpr int kExitUsage = 2;

/// Lowest acceptable empirical coverage: (1 - alpha) minus three binomial
/// standard errors at R replications.
double coverage_pass_threshold(double alpha, std::uint64_t replications);

/// Subcommands: coverage, testgame, klcheck, curves, sandwich. `args`
/// excludes the program name. Summaries go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace anytime
