#include "decimal.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace stocksel::decimal {

std::optional<double> parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string buf(text);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || errno == ERANGE) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

double quantize(double value) {
  return std::llround(value * 1e4) / 1e4;
}

std::string format(double value) {
  const std::int64_t scaled = std::llround(value * 1e4);
  std::int64_t whole = scaled / 10000;
  std::int64_t frac = scaled % 10000;
  const bool negative = scaled < 0;
  if (negative) {
    whole = -whole;
    frac = -frac;
  }
  char buf[40];
  if (frac == 0) {
    std::snprintf(buf, sizeof buf, "%s%lld", negative ? "-" : "", static_cast<long long>(whole));
    return buf;
  }
  std::snprintf(buf, sizeof buf, "%s%lld.%04lld", negative ? "-" : "",
                static_cast<long long>(whole), static_cast<long long>(frac));
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  return s;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string buf(text);
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(buf.c_str(), &end, 10);
  if (end != buf.c_str() + buf.size() || errno == ERANGE) return std::nullopt;
  return v;
}

}  // namespace stocksel::decimal
