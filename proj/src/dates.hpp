#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace stocksel {

/// Calendar date stored as days since 1970-01-01.
struct Date {
  std::int32_t serial = 0;

  static Date from_ymd(int year, int month, int day);
  static std::optional<Date> parse(std::string_view iso);  // "YYYY-MM-DD"

  std::string iso() const;
  int weekday() const;  // 0 = Sunday .. 6 = Saturday
  bool is_weekend() const { return weekday() == 0 || weekday() == 6; }
  Date plus_days(int n) const { return Date{serial + n}; }

  auto operator<=>(const Date&) const = default;
};

/// Intraday bucket-end time as minutes since midnight ("09:45" -> 585).
std::optional<int> parse_time_hhmm(std::string_view text);
std::string format_time_hhmm(int minute_of_day);

}  // namespace stocksel
