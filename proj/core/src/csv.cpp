#include "mvstream/csv.hpp"

#include <charconv>

namespace mvstream::csv {

std::string number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string number(int value) { return std::to_string(value); }

std::string number(long long value) { return std::to_string(value); }

}  // namespace mvstream::csv
