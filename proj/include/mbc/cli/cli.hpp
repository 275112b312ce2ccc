// The `mbc` command line, callable in-process so tests can check exit codes.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mbc::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_findings = 1;
inline constexpr int exit_usage = 2;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mbc::cli
