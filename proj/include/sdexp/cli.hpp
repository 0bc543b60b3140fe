#pragma once

#include <iosfwd>

namespace sdexp {

/// Command-line entry point; returns the process exit status.
int run_cli(int argc, const char* const* argv);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sdexp
