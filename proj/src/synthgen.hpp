#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bars.hpp"

namespace stocksel::synthgen {

/// Seeded synthetic multi-instrument bar generator with a planted,
/// tunable next-day signal, so training and backtesting are verifiable
/// without proprietary market data.
struct SynthConfig {
  std::uint64_t seed = 42;
  int n_instruments = 12;
  int n_days = 60;                // >= 12 so ten-day windows exist
  double signal_strength = 0.8;   // in [0,1]; 0 = pure noise labels
  double base_volatility = 0.015; // daily open-to-close return scale
  double price_scale = 25.0;
  Date start_date = Date::from_ymd(2021, 1, 4);
};

struct TruthRow {
  std::string instrument_id;
  Date date;           // the day whose return carries the signal
  double functional;   // planted linear functional of the prior day
  double planted_return;
};

struct SynthOutput {
  std::map<std::string, BarSeries> bars;  // 15-minute, 16 bars per day
  std::vector<TruthRow> truth;
  TradingCalendar calendar;
};

/// Deterministic under the seed; every emitted bar passes market-data
/// validation. The next-day return mixes a fixed linear functional of the
/// prior day's min-max-normalized features with noise, weighted by
/// signal_strength.
SynthOutput generate(const SynthConfig& config);

std::string truth_csv(const std::vector<TruthRow>& truth);
void write_truth(const std::vector<TruthRow>& truth, const std::filesystem::path& path);

}  // namespace stocksel::synthgen
