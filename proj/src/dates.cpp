#include "dates.hpp"

#include <chrono>
#include <cstdio>

namespace stocksel {

namespace chr = std::chrono;

Date Date::from_ymd(int year, int month, int day) {
  const chr::year_month_day ymd{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                                chr::day{static_cast<unsigned>(day)}};
  const chr::sys_days sd{ymd};
  return Date{static_cast<std::int32_t>(sd.time_since_epoch().count())};
}

std::optional<Date> Date::parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  for (int i : {0, 1, 2, 3}) {
    if (iso[i] < '0' || iso[i] > '9') return std::nullopt;
    y = y * 10 + (iso[i] - '0');
  }
  for (int i : {5, 6}) {
    if (iso[i] < '0' || iso[i] > '9') return std::nullopt;
    m = m * 10 + (iso[i] - '0');
  }
  for (int i : {8, 9}) {
    if (iso[i] < '0' || iso[i] > '9') return std::nullopt;
    d = d * 10 + (iso[i] - '0');
  }
  const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                                chr::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return from_ymd(y, m, d);
}

std::string Date::iso() const {
  const chr::sys_days sd{chr::days{serial}};
  const chr::year_month_day ymd{sd};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

int Date::weekday() const {
  const chr::sys_days sd{chr::days{serial}};
  return static_cast<int>(chr::weekday{sd}.c_encoding());
}

std::optional<int> parse_time_hhmm(std::string_view text) {
  if (text.size() != 5 || text[2] != ':') return std::nullopt;
  for (int i : {0, 1, 3, 4}) {
    if (text[i] < '0' || text[i] > '9') return std::nullopt;
  }
  const int h = (text[0] - '0') * 10 + (text[1] - '0');
  const int m = (text[3] - '0') * 10 + (text[4] - '0');
  if (h > 23 || m > 59) return std::nullopt;
  return h * 60 + m;
}

std::string format_time_hhmm(int minute_of_day) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minute_of_day / 60, minute_of_day % 60);
  return buf;
}

}  // namespace stocksel
