#pragma once

#include <string>
#include <vector>

namespace improper {

// Runs the command line in-process. Exit codes: 0 success/verified,
// 1 runtime failure, 2 config or usage error, 3 construction infeasible.
int run_cli(const std::vector<std::string>& args);

}  // namespace improper
