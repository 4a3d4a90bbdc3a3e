#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>

#include "radcool/units.hpp"

namespace radcool {

/// Fixed-width general rendering; 17 significant digits round-trips a double.
inline std::string format_number(double x, int significant = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, x);
  return buf;
}

inline std::string format_fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

/// Parses a full token as a double; throws ValidationError(path) otherwise.
inline double parse_number(std::string_view token, const std::string& path) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r'))
    token.remove_suffix(1);
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || token.empty())
    throw ValidationError(path, "not a number: '" + std::string(token) + "'");
  return value;
}

}  // namespace radcool
