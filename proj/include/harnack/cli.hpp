#pragma once

#include <string>
#include <vector>

namespace harnack {

/// Runs the command-line front end. Exit codes: 0 = all checks passed,
/// 1 = a verification found a violation (reported, not crashed),
/// 2 = usage or domain error.
int run_cli(const std::vector<std::string>& args);

}  // namespace harnack
