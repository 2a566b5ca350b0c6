#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "tempsweep/errors.hpp"

namespace tempsweep {

/// Shortest decimal form that parses back to the same double; deterministic
/// and locale-independent, so emitted files are byte-stable.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

/// Strict full-string double parse; `line` feeds the ParseError when given.
inline double parse_strict_double(std::string_view text, int line = 0) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ParseError((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         "bad number '" + std::string(text) + "'",
                     line);
  return value;
}

}  // namespace tempsweep
