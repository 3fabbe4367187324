#pragma once

#include <iosfwd>

namespace zt {

// Parses argv, runs one command, writes records to out (or --out) and diagnostics to err.
// Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zt
