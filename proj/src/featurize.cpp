#include "featurize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace stocksel {

const char* to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::S: return "S";
    case WindowKind::L: return "L";
    case WindowKind::Cnn5d: return "CNN5D";
  }
  return "?";
}

WindowKind window_kind_from_string(const std::string& text) {
  if (text == "S") return WindowKind::S;
  if (text == "L") return WindowKind::L;
  if (text == "CNN5D") return WindowKind::Cnn5d;
  throw Error(ErrorKind::InvalidConfig, "unknown window kind " + text);
}

int window_steps(WindowKind kind) {
  switch (kind) {
    case WindowKind::S: return 16;
    case WindowKind::L: return 20;
    case WindowKind::Cnn5d: return 80;
  }
  return 0;
}

int window_history_days(WindowKind kind) {
  switch (kind) {
    case WindowKind::S: return 1;
    case WindowKind::L: return 10;
    case WindowKind::Cnn5d: return 5;
  }
  return 0;
}

Frequency window_frequency(WindowKind kind) {
  return kind == WindowKind::L ? Frequency::Min120 : Frequency::Min15;
}

double daily_return(std::span<const Bar> day) {
  if (day.empty()) throw Error(ErrorKind::EmptyInput, "empty day");
  const double open = day.front().open;
  if (open == 0.0) throw Error(ErrorKind::ZeroOpen, "open price is zero");
  return (day.back().close - open) / open;
}

namespace {

/// p-th percentile of sorted data, linear interpolation between closest
/// order statistics.
double percentile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  const double h = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

LabelScheme calibrate_labels(std::vector<double> returns, std::string sample_descriptor) {
  if (returns.size() < 8) {
    throw Error(ErrorKind::TooFewSamples,
                "need >= 8 observations, got " + std::to_string(returns.size()));
  }
  for (double r : returns) {
    if (!std::isfinite(r)) throw Error(ErrorKind::NonFiniteInput, "non-finite return");
  }
  std::sort(returns.begin(), returns.end());

  LabelScheme scheme;
  scheme.q1 = percentile_sorted(returns, 0.25);
  scheme.q2 = percentile_sorted(returns, 0.50);
  scheme.q3 = percentile_sorted(returns, 0.75);
  scheme.sample_descriptor = std::move(sample_descriptor);

  std::array<double, 4> sums{};
  std::array<std::size_t, 4> counts{};
  for (double r : returns) {
    const int k = classify(r, scheme);
    sums[k] += r;
    counts[k] += 1;
  }
  for (int k = 0; k < kNumClasses; ++k) {
    if (counts[k] == 0) {
      throw Error(ErrorKind::DegenerateSample,
                  std::string("no observations in class ") + kClassNames[k]);
    }
    scheme.class_mean_yield[k] = sums[k] / static_cast<double>(counts[k]);
  }
  return scheme;
}

int classify(double r, const LabelScheme& scheme) {
  if (r < scheme.q1) return 0;
  if (r < scheme.q2) return 1;
  if (r < scheme.q3) return 2;
  return 3;
}

nn::Tensor normalize_window(const nn::Tensor& raw) {
  if (!raw.all_finite()) throw Error(ErrorKind::NonFiniteInput, "window has non-finite values");
  nn::Tensor out(raw.rows(), raw.cols());
  for (std::size_t c = 0; c < raw.cols(); ++c) {
    double lo = raw.at(0, c), hi = raw.at(0, c);
    for (std::size_t r = 1; r < raw.rows(); ++r) {
      lo = std::min(lo, raw.at(r, c));
      hi = std::max(hi, raw.at(r, c));
    }
    const double range = hi - lo;
    if (range == 0.0) continue;  // constant column maps to all-zero
    for (std::size_t r = 0; r < raw.rows(); ++r) {
      out.at(r, c) = (raw.at(r, c) - lo) / range;
    }
  }
  return out;
}

std::vector<LabeledInstance> build_windows(const std::map<std::string, BarSeries>& series,
                                           WindowKind kind, const TradingCalendar& cal,
                                           const LabelScheme& scheme) {
  const int history = window_history_days(kind);
  const Frequency freq = window_frequency(kind);
  const std::size_t buckets = TradingCalendar::buckets_per_day(freq);
  const int steps = window_steps(kind);

  std::vector<LabeledInstance> out;
  for (const auto& [id, s] : series) {
    if (s.frequency != freq) {
      throw Error(ErrorKind::FrequencyMismatch,
                  std::string("window kind ") + to_string(kind) + " needs " + to_string(freq) +
                      " series, got " + to_string(s.frequency));
    }
    std::map<Date, std::span<const Bar>> by_day;
    for (const auto& [date, day] : group_by_day(s)) {
      if (day.size() == buckets) by_day.emplace(date, day);
    }

    for (const auto& [as_of, day] : by_day) {
      const std::ptrdiff_t cal_idx = cal.index_of(as_of);
      if (cal_idx < history) continue;
      // the required days must be the consecutive calendar predecessors;
      // a suspension gap anywhere in the span skips the instance
      bool have_history = true;
      std::vector<std::span<const Bar>> window_days;
      window_days.reserve(history);
      for (int k = history; k >= 1; --k) {
        const Date d = cal.dates()[cal_idx - k];
        const auto it = by_day.find(d);
        if (it == by_day.end()) {
          have_history = false;
          break;
        }
        window_days.push_back(it->second);
      }
      if (!have_history) continue;

      nn::Tensor raw(steps, kFeatureCount);
      std::size_t row = 0;
      for (const auto& wd : window_days) {
        for (const Bar& b : wd) {
          const auto f = b.features();
          for (int c = 0; c < kFeatureCount; ++c) raw.at(row, c) = f[c];
          ++row;
        }
      }

      LabeledInstance inst;
      inst.window.instrument_id = id;
      inst.window.as_of_date = as_of;
      inst.window.kind = kind;
      inst.window.matrix = normalize_window(raw);
      inst.realized_return = daily_return(day);
      inst.label = classify(inst.realized_return, scheme);
      out.push_back(std::move(inst));
    }
  }
  return out;
}

SplitResult chronological_split(const Dataset& instances, double frac) {
  std::set<Date> date_set;
  for (const auto& inst : instances) date_set.insert(inst.window.as_of_date);
  if (date_set.size() < 2) {
    throw Error(ErrorKind::TooFewDates,
                "need >= 2 distinct dates, got " + std::to_string(date_set.size()));
  }
  const std::vector<Date> dates(date_set.begin(), date_set.end());
  const std::size_t n_train = static_cast<std::size_t>(
      std::floor(frac * static_cast<double>(dates.size())));
  if (n_train == 0 || n_train >= dates.size()) {
    throw Error(ErrorKind::TooFewDates, "split fraction leaves an empty side");
  }
  const Date cutoff = dates[n_train - 1];  // last train date

  SplitResult result;
  result.spec.train_begin = dates.front();
  result.spec.train_end = cutoff;
  result.spec.test_begin = dates[n_train];
  result.spec.test_end = dates.back();
  for (const auto& inst : instances) {
    if (inst.window.as_of_date <= cutoff) {
      result.train.push_back(inst);
    } else {
      result.test.push_back(inst);
    }
  }
  return result;
}

namespace {
std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

std::string serialize_scheme(const LabelScheme& scheme) {
  std::string out = "# label scheme: cut points and per-class mean yields\n";
  out += "q1 " + format_g17(scheme.q1) + "\n";
  out += "q2 " + format_g17(scheme.q2) + "\n";
  out += "q3 " + format_g17(scheme.q3) + "\n";
  for (int k = 0; k < kNumClasses; ++k) {
    out += "w" + std::to_string(k) + " " + format_g17(scheme.class_mean_yield[k]) + "\n";
  }
  if (!scheme.sample_descriptor.empty()) out += "sample " + scheme.sample_descriptor + "\n";
  return out;
}

LabelScheme parse_scheme(const std::string& text) {
  LabelScheme scheme;
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "sample") {
      std::string rest;
      std::getline(ls, rest);
      if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
      scheme.sample_descriptor = rest;
      continue;
    }
    double value = 0;
    if (!(ls >> value)) throw Error(ErrorKind::InvalidConfig, "bad scheme line: " + line);
    if (key == "q1") scheme.q1 = value;
    else if (key == "q2") scheme.q2 = value;
    else if (key == "q3") scheme.q3 = value;
    else if (key == "w0") scheme.class_mean_yield[0] = value;
    else if (key == "w1") scheme.class_mean_yield[1] = value;
    else if (key == "w2") scheme.class_mean_yield[2] = value;
    else if (key == "w3") scheme.class_mean_yield[3] = value;
    else throw Error(ErrorKind::InvalidConfig, "unknown scheme key " + key);
    seen.insert(key);
  }
  for (const char* key : {"q1", "q2", "q3", "w0", "w1", "w2", "w3"}) {
    if (!seen.count(key)) throw Error(ErrorKind::InvalidConfig, std::string("scheme missing ") + key);
  }
  return scheme;
}

void write_scheme(const LabelScheme& scheme, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << serialize_scheme(scheme);
}

LabelScheme read_scheme(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scheme(ss.str());
}

}  // namespace stocksel
