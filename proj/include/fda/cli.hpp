#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fda {

// Entry point of the command line tool. Returns the process exit code:
// 0 success, 2 usage error, 3 data error, 4 numerical failure.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

} // namespace fda
