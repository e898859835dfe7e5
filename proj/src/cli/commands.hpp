#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bimeans::cli {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kUsageError = 2 };

/// Entry point shared by the executable and the in-process tests. `args`
/// excludes the program name. Writes the JSON record (or CSV) to `out` and
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bimeans::cli
