#pragma once

#include <iosfwd>

namespace acmatch::cli {

/// Runs one command line. Exit codes: 0 success, 1 runtime or I/O error,
/// 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace acmatch::cli
