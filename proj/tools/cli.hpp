#pragma once

#include <ostream>

namespace crw::cli {

enum ExitCode : int { kSuccess = 0, kVerdictFailed = 1, kUsageError = 2 };

/// Entry point of the crw tool. Output without --out goes to `out`;
/// diagnostics and the config echo of stdout CSV go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace crw::cli
