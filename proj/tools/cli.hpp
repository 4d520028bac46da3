#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stratbound::cli {

enum Exit : int { ok = 0, refuted = 1, inconclusive = 2, usage = 3 };

/// args excludes the program name. Reports go to `out` (or the --output
/// file), messages to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stratbound::cli
