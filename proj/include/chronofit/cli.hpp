#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chronofit::cli {

enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2, numerical_error = 3 };

/// Runs one command line (`args` excludes the program name). Reports go to
/// `out`; usage text and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace chronofit::cli
