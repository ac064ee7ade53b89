#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levyerg {

/// Exit codes. certify: 0 certified, 2 not certified. converge: 0 pass,
/// 3 fail, 4 inconclusive. Any error: 1.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int error = 1;
inline constexpr int not_certified = 2;
inline constexpr int rate_fail = 3;
inline constexpr int inconclusive = 4;
}  // namespace exit_code

/// Runs "levyerg <subcommand> --config PATH [--out DIR] [--seed U64] [--threads N]".
/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levyerg
