#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace doseeffect::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation of the `doseeffect` tool. `args` excludes the program
/// name. `--input -` (the default) reads `in`; `--output -` writes `out`.
/// Domain failures are printed to `err` as `ERROR <code>: <message>`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace doseeffect::cli
