#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stratcomm {

/// Runs one command line (without the program name). Results go to `out`
/// or to the --out path; failures print a single line
///   error kind=<Kind> exit=<code> msg="<text>"
/// to `err`. Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const char* tool_version() noexcept;

}  // namespace stratcomm
