#include "synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "decimal.hpp"
#include "featurize.hpp"

namespace stocksel::synthgen {

namespace {

constexpr int kBuckets = 16;

/// Per-feature weights of the planted functional, in Bar::features order.
/// A recency ramp multiplies them so the end of the day matters most.
constexpr double kFeatureWeight[kFeatureCount] = {
    0.45,   // close
    -0.20,  // open
    0.10,   // high
    -0.10,  // low
    0.35,   // volume
    0.0,    // amount
    0.15,   // num_transactions
    -0.25,  // commission_ratio
    0.20,   // volume_ratio
    -0.10,  // commission_purchase
    0.10,   // commission_sale
};

/// Zero-sum recency weights over the day's buckets: late buckets count for,
/// early ones against, so any per-column level offset cancels and the
/// functional is a trend read, not a level read.
double time_weight(int t) {
  const double ramp = static_cast<double>(t + 1) / kBuckets;
  const double ramp_mean = static_cast<double>(kBuckets + 1) / (2.0 * kBuckets);
  return ramp - ramp_mean;
}

double functional_scale() {
  // unit-variance-ish normalizer assuming independent U(0,1) entries
  double time_sumsq = 0;
  for (int t = 0; t < kBuckets; ++t) time_sumsq += time_weight(t) * time_weight(t);
  double feat_sumsq = 0;
  for (double w : kFeatureWeight) feat_sumsq += w * w;
  return std::sqrt(feat_sumsq * time_sumsq / 12.0);
}

/// Planted functional of one complete day's bars (min-max normalized the
/// same way featurize normalizes an S window).
double planted_functional(const std::vector<Bar>& day) {
  nn::Tensor raw(kBuckets, kFeatureCount);
  for (int t = 0; t < kBuckets; ++t) {
    const auto f = day[static_cast<std::size_t>(t)].features();
    for (int k = 0; k < kFeatureCount; ++k) raw.at(t, k) = f[k];
  }
  const nn::Tensor norm = normalize_window(raw);
  double g = 0;
  for (int t = 0; t < kBuckets; ++t) {
    for (int k = 0; k < kFeatureCount; ++k) {
      g += kFeatureWeight[k] * time_weight(t) * norm.at(t, k);
    }
  }
  static const double scale = functional_scale();
  return g / scale;
}

void validate(const SynthConfig& c) {
  if (c.n_instruments < 1) throw Error(ErrorKind::InvalidConfig, "n_instruments must be >= 1");
  if (c.n_days < 12)
    throw Error(ErrorKind::InvalidConfig,
                "n_days must be >= 12 (ten-day windows plus an as-of day)");
  if (!(c.signal_strength >= 0.0 && c.signal_strength <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "signal_strength must be in [0,1]");
  if (!(c.base_volatility > 0.0)) throw Error(ErrorKind::InvalidConfig, "base_volatility <= 0");
  if (!(c.price_scale > 0.0)) throw Error(ErrorKind::InvalidConfig, "price_scale <= 0");
}

/// One trading day of 16 bars realizing the open-to-close return r via a
/// geometric Brownian bridge on log price.
std::vector<Bar> make_day(Date date, double open_price, double r, double bucket_vol,
                          rng::Rng& rng) {
  const auto& ends = TradingCalendar::bucket_ends(Frequency::Min15);
  // bridge on log price pinned at both ends
  std::array<double, kBuckets + 1> walk{};
  for (int t = 1; t <= kBuckets; ++t) walk[t] = walk[t - 1] + bucket_vol * rng.normal();
  std::array<double, kBuckets + 1> logp{};
  const double l0 = std::log(open_price);
  const double l1 = std::log(open_price * (1.0 + r));
  for (int t = 0; t <= kBuckets; ++t) {
    const double frac = static_cast<double>(t) / kBuckets;
    logp[t] = l0 + frac * (l1 - l0) + (walk[t] - frac * walk[kBuckets]);
  }

  std::vector<Bar> day(kBuckets);
  for (int t = 0; t < kBuckets; ++t) {
    Bar& b = day[static_cast<std::size_t>(t)];
    b.date = date;
    b.minute_of_day = ends[static_cast<std::size_t>(t)];
    const double raw_open = std::exp(logp[t]);
    const double raw_close = std::exp(logp[t + 1]);
    const double wick_hi = 1.0 + std::abs(rng.normal()) * bucket_vol * 0.5;
    const double wick_lo = 1.0 - std::abs(rng.normal()) * bucket_vol * 0.5;
    b.open = decimal::quantize(raw_open);
    b.close = decimal::quantize(raw_close);
    b.high = decimal::quantize(std::max(raw_open, raw_close) * wick_hi);
    b.low = decimal::quantize(std::max(0.0, std::min(raw_open, raw_close) * wick_lo));
    b.volume = std::floor(std::exp(std::log(3e5) + 0.8 * rng.normal()));
    b.amount = decimal::quantize(b.volume * 0.5 * (b.open + b.close));
    b.num_transactions = std::max<std::int64_t>(
        1, std::llround(b.volume / 250.0 * rng.uniform(0.8, 1.2)));
    b.commission_ratio = decimal::quantize(rng.uniform(-5.0, 5.0));
    b.volume_ratio = decimal::quantize(rng.uniform(0.2, 3.8));
    b.commission_purchase = decimal::quantize(b.volume * b.open * rng.uniform(20.0, 80.0));
    b.commission_sale = decimal::quantize(b.volume * b.open * rng.uniform(20.0, 80.0));
  }
  return day;
}

}  // namespace

SynthOutput generate(const SynthConfig& config) {
  validate(config);

  std::vector<Date> dates;
  Date d = config.start_date;
  while (static_cast<int>(dates.size()) < config.n_days) {
    if (!d.is_weekend()) dates.push_back(d);
    d = d.plus_days(1);
  }

  SynthOutput out;
  out.calendar = TradingCalendar(dates);

  const double bucket_vol = config.base_volatility / std::sqrt(static_cast<double>(kBuckets));
  for (int inst = 0; inst < config.n_instruments; ++inst) {
    char name[16];
    std::snprintf(name, sizeof name, "SY%04d", inst + 1);
    rng::Rng rng(rng::derive(config.seed, "data", static_cast<std::uint64_t>(inst)));

    BarSeries series{name, Frequency::Min15, {}};
    series.bars.reserve(static_cast<std::size_t>(config.n_days) * kBuckets);

    double open_price = config.price_scale * rng.uniform(0.6, 1.4);
    std::vector<Bar> prev_day;
    for (int day_idx = 0; day_idx < config.n_days; ++day_idx) {
      double r;
      if (day_idx == 0) {
        r = std::clamp(config.base_volatility * rng.normal(), -0.095, 0.095);
      } else {
        const double g = planted_functional(prev_day);
        const double noise = rng.normal();
        r = config.base_volatility *
            (config.signal_strength * g + (1.0 - config.signal_strength) * noise);
        r = std::clamp(r, -0.095, 0.095);  // price-limit style cap keeps prices sane
        out.truth.push_back({name, dates[static_cast<std::size_t>(day_idx)], g, r});
      }

      std::vector<Bar> day =
          make_day(dates[static_cast<std::size_t>(day_idx)], open_price, r, bucket_vol, rng);
      const double close_price = day.back().close;
      open_price = std::max(0.05, close_price * (1.0 + 0.2 * config.base_volatility * rng.normal()));
      prev_day = day;
      for (Bar& b : day) series.bars.push_back(b);
    }
    out.bars.emplace(name, std::move(series));
  }
  return out;
}

std::string truth_csv(const std::vector<TruthRow>& truth) {
  std::string out = "instrument,date,functional,planted_return\n";
  char buf[32];
  for (const auto& row : truth) {
    out += row.instrument_id;
    out += ',';
    out += row.date.iso();
    out += ',';
    std::snprintf(buf, sizeof buf, "%.10g", row.functional);
    out += buf;
    out += ',';
    std::snprintf(buf, sizeof buf, "%.10g", row.planted_return);
    out += buf;
    out += '\n';
  }
  return out;
}

void write_truth(const std::vector<TruthRow>& truth, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << truth_csv(truth);
}

}  // namespace stocksel::synthgen
