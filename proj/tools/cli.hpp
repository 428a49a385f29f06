#pragma once

#include <iosfwd>

namespace drgen {

/// Runs the command line against the given streams and returns the process
/// exit status: 0 success, 2 usage, 3 config or parse error, 4 I/O,
/// 5 scenario constraint, 6 structural, 1 anything else.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace drgen
