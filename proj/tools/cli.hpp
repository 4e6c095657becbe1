#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace phigeo::cli {

// Run one command line (arguments without the program name, natural order).
// Returns the process exit status: 0 success, 1 numeric check failure,
// 2 usage or input error.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace phigeo::cli
