#pragma once

#include <string>
#include <vector>

namespace tricons::cli {

/// Runs the command-line front end on argv (excluding the program name).
/// Exit status: 0 success, 1 usage/IO error, 2 validation failure,
/// 3 synthesis infeasible.
int run(const std::vector<std::string>& args);

} // namespace tricons::cli
