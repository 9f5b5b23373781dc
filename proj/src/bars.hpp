#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dates.hpp"
#include "error.hpp"

namespace stocksel {

enum class Frequency { Min15, Min120 };

const char* to_string(Frequency f);

/// One time-bucket snapshot of the 11 price-volume features for one
/// instrument. Field order mirrors the CSV schema.
struct Bar {
  Date date;
  int minute_of_day = 0;  // bucket end, e.g. 09:45 -> 585
  double close = 0;
  double open = 0;
  double high = 0;
  double low = 0;
  double volume = 0;
  double amount = 0;
  std::int64_t num_transactions = 0;
  double commission_ratio = 0;  // signed on Chinese terminals; accepted as-is
  double volume_ratio = 0;
  double commission_purchase = 0;
  double commission_sale = 0;

  /// The 11 features in model order: close, open, high, low, volume, amount,
  /// num_transactions, commission_ratio, volume_ratio, commission_purchase,
  /// commission_sale.
  std::array<double, 11> features() const;

  /// low <= min(open, close), high >= max(open, close), volume/amount/not >= 0.
  /// Returns an empty string when valid, else a description of the violation.
  std::string invariant_violation() const;
};

inline constexpr int kFeatureCount = 11;

struct BarSeries {
  std::string instrument_id;
  Frequency frequency = Frequency::Min15;
  std::vector<Bar> bars;  // strictly increasing (date, minute)
};

/// Trading dates plus the intraday session grid (09:30-11:30, 13:00-15:00).
class TradingCalendar {
 public:
  TradingCalendar() = default;
  explicit TradingCalendar(std::vector<Date> dates);

  static TradingCalendar from_data(const std::map<std::string, BarSeries>& series);

  const std::vector<Date>& dates() const { return dates_; }
  bool contains(Date d) const;
  /// Index of d in dates(), or -1.
  std::ptrdiff_t index_of(Date d) const;

  /// Bucket-end minutes for one complete trading day at the given frequency:
  /// 16 buckets for 15-minute data, 2 for 120-minute data.
  static const std::vector<int>& bucket_ends(Frequency f);
  static std::size_t buckets_per_day(Frequency f);

 private:
  std::vector<Date> dates_;
};

/// The stock pool: non-empty, duplicate-free instrument ids.
struct Universe {
  std::vector<std::string> ids;

  static Universe from_ids(std::vector<std::string> ids);
  static Universe from_file(const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;
};

struct RowIssue {
  std::size_t row = 0;  // 1-based line number in the file
  ErrorKind kind = ErrorKind::MalformedRow;
  std::string message;
};

struct LoadResult {
  std::map<std::string, BarSeries> series;
  std::vector<RowIssue> issues;
  std::size_t rows_seen = 0;
};

inline constexpr const char* kCsvHeader =
    "instrument,date,time,close,open,high,low,volume,amount,not,cr,vr,cp,cs";

/// Parses the bar CSV, collecting row-level diagnostics instead of stopping
/// at the first defect. Valid rows are grouped per instrument, sorted, and
/// checked for duplicate timestamps.
LoadResult scan_bars(const std::filesystem::path& path, Frequency frequency);

/// Strict variant: any reject raises the first issue as an Error.
std::map<std::string, BarSeries> load_bars(const std::filesystem::path& path,
                                           Frequency frequency);

/// Canonical serialization: header plus rows sorted by (instrument, date,
/// time) with canonical decimal formatting. load o serialize is the identity
/// on canonical files.
std::string serialize_bars(const std::map<std::string, BarSeries>& series);
void write_bars(const std::map<std::string, BarSeries>& series,
                const std::filesystem::path& path);

/// Aggregates a 15-minute series into 120-minute session buckets:
/// open = first open, close = last close, high = max, low = min,
/// volume/amount/num_transactions = sums, commission_ratio/volume_ratio =
/// volume-weighted means, commission_purchase/sale = last values.
BarSeries resample_to_120min(const BarSeries& series);

/// Drops days with missing buckets (suspension) so only complete trading
/// days remain. Idempotent.
BarSeries align_to_calendar(const BarSeries& series, const TradingCalendar& cal);

/// Groups a series by date; each span covers one complete or partial day.
std::vector<std::pair<Date, std::span<const Bar>>> group_by_day(const BarSeries& series);

}  // namespace stocksel
