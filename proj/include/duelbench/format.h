#pragma once

#include <charconv>
#include <string>

namespace duelbench {

// Shortest round-trip decimal form, independent of locale.
inline std::string FormatDouble(double v) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, result.ptr);
}

}  // namespace duelbench
