#pragma once

// Locale-independent numeric formatting for report files: 12 significant
// digits via std::to_chars, so identical configs yield identical bytes on
// every platform.

#include <charconv>
#include <string>

namespace tmsv {

inline std::string format_number(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x,
                           std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

}  // namespace tmsv
