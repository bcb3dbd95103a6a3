#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pantslab::cli {

// Runs one command (args exclude the program name); results go to `out`,
// diagnostics to `err`.  Exit codes: 0 success, 2 validation or domain
// failure, 1 numerical or resource failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace pantslab::cli
