#pragma once

#include <iosfwd>

namespace farey::cli {

/// Runs the farey command line. Exit codes: 0 success, 1 failed check or
/// runtime error, 2 invalid arguments.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace farey::cli
