#pragma once

#include <string>
#include <vector>

namespace normsim::cli {

// Runs the command line tool. Exit codes: 0 check passed or artifact
// produced, 1 check failed, 2 usage or input error.
int run(const std::vector<std::string>& args);

}  // namespace normsim::cli
