#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace powerdiff::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `powerdiff` invocation. `args` excludes the program name.
/// Returns 0 on success, 1 on runtime failures, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace powerdiff::cli
