#pragma once

#include <ostream>
#include <span>
#include <string>

namespace pakf::cli {

/// Runs the `pakf` command line. Returns the process exit code:
/// 0 success, 1 usage error, 2 data/format error, 3 numerical error.
/// Diagnostics go to `err`, progress logging to `log`.
int run(std::span<const std::string> args, std::ostream& log, std::ostream& err);

}  // namespace pakf::cli
