#include "bars.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "decimal.hpp"

namespace stocksel {

const char* to_string(Frequency f) {
  return f == Frequency::Min15 ? "15min" : "120min";
}

std::array<double, 11> Bar::features() const {
  return {close, open,  high,
          low,   volume, amount,
          static_cast<double>(num_transactions), commission_ratio, volume_ratio,
          commission_purchase, commission_sale};
}

std::string Bar::invariant_violation() const {
  if (low > std::min(open, close)) return "low > min(open, close)";
  if (high < std::max(open, close)) return "high < max(open, close)";
  if (volume < 0) return "negative volume";
  if (amount < 0) return "negative amount";
  if (num_transactions < 0) return "negative num_transactions";
  return {};
}

TradingCalendar::TradingCalendar(std::vector<Date> dates) : dates_(std::move(dates)) {
  std::sort(dates_.begin(), dates_.end());
  dates_.erase(std::unique(dates_.begin(), dates_.end()), dates_.end());
}

TradingCalendar TradingCalendar::from_data(const std::map<std::string, BarSeries>& series) {
  std::set<Date> dates;
  for (const auto& [id, s] : series) {
    for (const Bar& b : s.bars) dates.insert(b.date);
  }
  return TradingCalendar(std::vector<Date>(dates.begin(), dates.end()));
}

bool TradingCalendar::contains(Date d) const {
  return std::binary_search(dates_.begin(), dates_.end(), d);
}

std::ptrdiff_t TradingCalendar::index_of(Date d) const {
  const auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
  if (it == dates_.end() || *it != d) return -1;
  return it - dates_.begin();
}

const std::vector<int>& TradingCalendar::bucket_ends(Frequency f) {
  // Sessions 09:30-11:30 and 13:00-15:00; times mark bucket ends.
  static const std::vector<int> min15 = [] {
    std::vector<int> v;
    for (int k = 1; k <= 8; ++k) v.push_back(9 * 60 + 30 + 15 * k);
    for (int k = 1; k <= 8; ++k) v.push_back(13 * 60 + 15 * k);
    return v;
  }();
  static const std::vector<int> min120 = {11 * 60 + 30, 15 * 60};
  return f == Frequency::Min15 ? min15 : min120;
}

std::size_t TradingCalendar::buckets_per_day(Frequency f) {
  return bucket_ends(f).size();
}

Universe Universe::from_ids(std::vector<std::string> ids) {
  if (ids.empty()) throw Error(ErrorKind::EmptyInput, "universe has no instruments");
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second)
      throw Error(ErrorKind::DuplicateInstrument, "duplicate instrument " + id);
  }
  return Universe{std::move(ids)};
}

Universe Universe::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    ids.push_back(line);
  }
  return from_ids(std::move(ids));
}

void Universe::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  for (const auto& id : ids) out << id << '\n';
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = comma == std::string_view::npos
                                 ? line.substr(start)
                                 : line.substr(start, comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
      field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
      field.remove_suffix(1);
    fields.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool bucket_allowed(Frequency f, int minute) {
  const auto& ends = TradingCalendar::bucket_ends(f);
  return std::find(ends.begin(), ends.end(), minute) != ends.end();
}

}  // namespace

LoadResult scan_bars(const std::filesystem::path& path, Frequency frequency) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());

  LoadResult result;
  std::string line;
  std::size_t row = 0;

  if (!std::getline(in, line)) {
    result.issues.push_back({1, ErrorKind::EmptyInput, "file has no header row"});
    return result;
  }
  row = 1;
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
  if (line != kCsvHeader) {
    result.issues.push_back({1, ErrorKind::MalformedRow, "bad header, expected: " + std::string(kCsvHeader)});
    return result;
  }

  struct Keyed {
    std::size_t row;
    Bar bar;
  };
  std::map<std::string, std::vector<Keyed>> grouped;

  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++result.rows_seen;

    const auto fields = split_csv(line);
    if (fields.size() != 14) {
      result.issues.push_back({row, ErrorKind::MalformedRow,
                               "expected 14 fields, got " + std::to_string(fields.size())});
      continue;
    }

    const auto date = Date::parse(fields[1]);
    if (!date) {
      result.issues.push_back({row, ErrorKind::MalformedRow, "bad date"});
      continue;
    }
    const auto minute = parse_time_hhmm(fields[2]);
    if (!minute) {
      result.issues.push_back({row, ErrorKind::MalformedRow, "bad time"});
      continue;
    }

    Bar bar;
    bar.date = *date;
    bar.minute_of_day = *minute;

    double nums[10];
    bool ok = true;
    static constexpr int kNumericFields[] = {3, 4, 5, 6, 7, 8, 10, 11, 12, 13};
    for (int i = 0; i < 10; ++i) {
      const auto v = decimal::parse(fields[kNumericFields[i]]);
      if (!v) {
        result.issues.push_back({row, ErrorKind::MalformedRow,
                                 "bad numeric field " + std::string(fields[kNumericFields[i]])});
        ok = false;
        break;
      }
      nums[i] = *v;
    }
    if (!ok) continue;
    const auto not_count = decimal::parse_int(fields[9]);
    if (!not_count) {
      result.issues.push_back({row, ErrorKind::MalformedRow, "bad num_transactions"});
      continue;
    }

    bar.close = nums[0];
    bar.open = nums[1];
    bar.high = nums[2];
    bar.low = nums[3];
    bar.volume = nums[4];
    bar.amount = nums[5];
    bar.num_transactions = *not_count;
    bar.commission_ratio = nums[6];
    bar.volume_ratio = nums[7];
    bar.commission_purchase = nums[8];
    bar.commission_sale = nums[9];

    if (auto violation = bar.invariant_violation(); !violation.empty()) {
      result.issues.push_back({row, ErrorKind::MalformedRow, violation});
      continue;
    }
    if (!bucket_allowed(frequency, bar.minute_of_day)) {
      result.issues.push_back({row, ErrorKind::FrequencyMismatch,
                               format_time_hhmm(bar.minute_of_day) + " is not a " +
                                   std::string(to_string(frequency)) + " bucket end"});
      continue;
    }

    grouped[std::string(fields[0])].push_back({row, bar});
  }

  if (result.rows_seen == 0 && result.issues.empty()) {
    result.issues.push_back({row, ErrorKind::EmptyInput, "no data rows"});
    return result;
  }

  for (auto& [id, keyed] : grouped) {
    std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
      return std::pair(a.bar.date, a.bar.minute_of_day) < std::pair(b.bar.date, b.bar.minute_of_day);
    });
    BarSeries series{id, frequency, {}};
    series.bars.reserve(keyed.size());
    bool first = true;
    std::pair<Date, int> prev;
    for (const Keyed& k : keyed) {
      const std::pair<Date, int> key(k.bar.date, k.bar.minute_of_day);
      if (!first && key == prev) {
        result.issues.push_back({k.row, ErrorKind::NonMonotonicTime,
                                 "duplicate timestamp " + k.bar.date.iso() + " " +
                                     format_time_hhmm(k.bar.minute_of_day)});
        continue;
      }
      prev = key;
      first = false;
      series.bars.push_back(k.bar);
    }
    if (!series.bars.empty()) result.series.emplace(id, std::move(series));
  }

  return result;
}

std::map<std::string, BarSeries> load_bars(const std::filesystem::path& path,
                                           Frequency frequency) {
  LoadResult result = scan_bars(path, frequency);
  if (!result.issues.empty()) {
    const RowIssue& first = result.issues.front();
    throw Error(first.kind, first.row, first.message);
  }
  return std::move(result.series);
}

namespace {

void append_row(std::string& out, const std::string& id, const Bar& b) {
  out += id;
  out += ',';
  out += b.date.iso();
  out += ',';
  out += format_time_hhmm(b.minute_of_day);
  for (double v : {b.close, b.open, b.high, b.low, b.volume, b.amount}) {
    out += ',';
    out += decimal::format(v);
  }
  out += ',';
  out += std::to_string(b.num_transactions);
  for (double v : {b.commission_ratio, b.volume_ratio, b.commission_purchase,
                   b.commission_sale}) {
    out += ',';
    out += decimal::format(v);
  }
  out += '\n';
}

}  // namespace

std::string serialize_bars(const std::map<std::string, BarSeries>& series) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& [id, s] : series) {
    for (const Bar& b : s.bars) append_row(out, id, b);
  }
  return out;
}

void write_bars(const std::map<std::string, BarSeries>& series,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << serialize_bars(series);
}

std::vector<std::pair<Date, std::span<const Bar>>> group_by_day(const BarSeries& series) {
  std::vector<std::pair<Date, std::span<const Bar>>> days;
  const auto& bars = series.bars;
  std::size_t i = 0;
  while (i < bars.size()) {
    std::size_t j = i;
    while (j < bars.size() && bars[j].date == bars[i].date) ++j;
    days.emplace_back(bars[i].date, std::span<const Bar>(&bars[i], j - i));
    i = j;
  }
  return days;
}

BarSeries resample_to_120min(const BarSeries& series) {
  if (series.frequency != Frequency::Min15)
    throw Error(ErrorKind::FrequencyMismatch, "resample input must be 15min");

  const auto& ends15 = TradingCalendar::bucket_ends(Frequency::Min15);
  const auto& ends120 = TradingCalendar::bucket_ends(Frequency::Min120);

  BarSeries out{series.instrument_id, Frequency::Min120, {}};
  for (const auto& [date, day] : group_by_day(series)) {
    for (int session = 0; session < 2; ++session) {
      // Session halves: the first 8 15-min buckets fold into 11:30, the
      // last 8 into 15:00.
      std::vector<const Bar*> members;
      for (const Bar& b : day) {
        const auto pos = std::find(ends15.begin(), ends15.end(), b.minute_of_day);
        const int idx = static_cast<int>(pos - ends15.begin());
        if (idx / 8 == session) members.push_back(&b);
      }
      if (members.size() != 8) {
        throw Error(ErrorKind::IncompleteSession,
                    date.iso() + " session " + std::to_string(session + 1) + " has " +
                        std::to_string(members.size()) + " of 8 buckets");
      }
      Bar agg;
      agg.date = date;
      agg.minute_of_day = ends120[session];
      agg.open = members.front()->open;
      agg.close = members.back()->close;
      agg.high = members.front()->high;
      agg.low = members.front()->low;
      double wcr = 0, wvr = 0;
      for (const Bar* b : members) {
        agg.high = std::max(agg.high, b->high);
        agg.low = std::min(agg.low, b->low);
        agg.volume += b->volume;
        agg.amount += b->amount;
        agg.num_transactions += b->num_transactions;
        wcr += b->commission_ratio * b->volume;
        wvr += b->volume_ratio * b->volume;
      }
      if (agg.volume > 0) {
        agg.commission_ratio = wcr / agg.volume;
        agg.volume_ratio = wvr / agg.volume;
      } else {
        // zero traded volume: volume weights degenerate, fall back to plain mean
        for (const Bar* b : members) {
          agg.commission_ratio += b->commission_ratio / 8.0;
          agg.volume_ratio += b->volume_ratio / 8.0;
        }
      }
      agg.commission_purchase = members.back()->commission_purchase;
      agg.commission_sale = members.back()->commission_sale;
      out.bars.push_back(agg);
    }
  }
  return out;
}

BarSeries align_to_calendar(const BarSeries& series, const TradingCalendar& cal) {
  const auto& ends = TradingCalendar::bucket_ends(series.frequency);
  BarSeries out{series.instrument_id, series.frequency, {}};
  for (const auto& [date, day] : group_by_day(series)) {
    if (!cal.contains(date)) continue;
    if (day.size() != ends.size()) continue;
    bool complete = true;
    for (std::size_t i = 0; i < day.size(); ++i) {
      if (day[i].minute_of_day != ends[i]) {
        complete = false;
        break;
      }
    }
    if (!complete) continue;
    out.bars.insert(out.bars.end(), day.begin(), day.end());
  }
  return out;
}

}  // namespace stocksel
