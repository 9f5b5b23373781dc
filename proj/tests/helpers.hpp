#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bars.hpp"

namespace testutil {

/// Unique scratch directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("stocksel_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  std::filesystem::path file(const std::string& name) const { return path / name; }
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline stocksel::Bar make_bar(stocksel::Date date, int minute, double close, double open,
                              double high, double low, double volume = 1000,
                              double amount = 10000, std::int64_t not_count = 10,
                              double cr = 1.0, double vr = 1.0, double cp = 100000,
                              double cs = 100000) {
  stocksel::Bar b;
  b.date = date;
  b.minute_of_day = minute;
  b.close = close;
  b.open = open;
  b.high = high;
  b.low = low;
  b.volume = volume;
  b.amount = amount;
  b.num_transactions = not_count;
  b.commission_ratio = cr;
  b.volume_ratio = vr;
  b.commission_purchase = cp;
  b.commission_sale = cs;
  return b;
}

/// One complete 15-minute trading day with a smooth price path.
inline std::vector<stocksel::Bar> make_day(stocksel::Date date, double base_price,
                                           double drift = 0.0) {
  const auto& ends = stocksel::TradingCalendar::bucket_ends(stocksel::Frequency::Min15);
  std::vector<stocksel::Bar> day;
  double price = base_price;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    const double next = price + drift + 0.01 * ((i % 3 == 0) ? 1.0 : -0.5);
    day.push_back(make_bar(date, ends[i], next, price, std::max(price, next) + 0.02,
                           std::min(price, next) - 0.02, 1000 + 10.0 * i));
    price = next;
  }
  return day;
}

}  // namespace testutil
