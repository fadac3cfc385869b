#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wqisa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Version string embedded in every JSON report.
const char* tool_version();

/// Runs one invocation. `args` excludes the program name. Reports go to `out`
/// unless a path is given, diagnostics and usage text to `err`.
///
/// Subcommands: split, fit, eval, compare, sample, synth. Returns 0 on success,
/// 1 on a usage error, 2 on a data error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wqisa::cli
