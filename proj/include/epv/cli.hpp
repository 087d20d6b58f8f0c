#pragma once

#include <iosfwd>

namespace epv {

/// Runs the `epv` command line. Returns the process exit code: 0 on success,
/// 1 for analysis errors, 2 for input errors (including bad arguments).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace epv
