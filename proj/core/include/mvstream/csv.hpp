#pragma once

#include <string>

namespace mvstream::csv {

/// Shortest round-trip decimal form with '.' separator, independent of the
/// global locale; integral values print without an exponent or trailing dot.
std::string number(double value);

std::string number(int value);
std::string number(long long value);

}  // namespace mvstream::csv
