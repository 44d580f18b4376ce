#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pa {

// Runs one `pa` command line (program name excluded).  Exit codes: 0 all checks pass, 1 a mathematical
// check failed, 2 input or usage error, 3 resource or internal error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pa
