#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace weedplan::cli {

inline constexpr const char *kVersion = "1.0.0";

/// Entry point shared by the executable and the tests. args excludes the
/// program name. Returns the process exit code: 0 success, 1 runtime or
/// infeasibility failure, 2 usage or parse error.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace weedplan::cli
