#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vbs::cli {

/// Runs the command line given as plain arguments (no program name).
/// Exit codes: 0 success, 2 bad input, 3 unsupported capability,
/// 4 broken invariant or unexpected failure.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Twelve significant digits, the format used for every reported number.
std::string format_value(double v);

}  // namespace vbs::cli
