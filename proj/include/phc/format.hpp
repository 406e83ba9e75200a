#pragma once

#include <string>

namespace phc {

/// Shortest decimal string that round-trips to the same double; locale independent.
/// Negative zero is written as "0".
std::string format_double(double value);

/// Parses a decimal number written by format_double (or any plain decimal). Throws IoError.
double parse_double(const std::string& text);

}  // namespace phc
