#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kernelpa::cli {

/// Runs one verb. `args` excludes the program name. Diagnostics go to `err`
/// as a single line "error kind=<kind> msg=<text>". Returns the exit code:
/// 0 on success, 1 for library errors, 2 for usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kernelpa::cli
