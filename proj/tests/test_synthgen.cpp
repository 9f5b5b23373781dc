#include <doctest.h>

#include <cmath>

#include "featurize.hpp"
#include "helpers.hpp"
#include "synthgen.hpp"

using namespace stocksel;

TEST_CASE("synthgen: config validation") {
  synthgen::SynthConfig cfg;
  cfg.n_days = 5;
  CHECK_THROWS_AS(synthgen::generate(cfg), Error);
  cfg = synthgen::SynthConfig{};
  cfg.signal_strength = 1.5;
  CHECK_THROWS_AS(synthgen::generate(cfg), Error);
  cfg = synthgen::SynthConfig{};
  cfg.n_instruments = 0;
  CHECK_THROWS_AS(synthgen::generate(cfg), Error);
}

TEST_CASE("synthgen: same seed is bitwise identical, different seeds differ") {
  synthgen::SynthConfig cfg;
  cfg.n_instruments = 3;
  cfg.n_days = 14;
  const auto a = synthgen::generate(cfg);
  const auto b = synthgen::generate(cfg);
  CHECK(serialize_bars(a.bars) == serialize_bars(b.bars));
  CHECK(synthgen::truth_csv(a.truth) == synthgen::truth_csv(b.truth));

  cfg.seed = 43;
  const auto c = synthgen::generate(cfg);
  CHECK(serialize_bars(a.bars) != serialize_bars(c.bars));
}

TEST_CASE("synthgen: all emitted bars pass market-data validation with zero rejects") {
  testutil::TempDir tmp;
  synthgen::SynthConfig cfg;
  cfg.n_instruments = 4;
  cfg.n_days = 20;
  const auto out = synthgen::generate(cfg);
  const auto path = tmp.file("bars.csv");
  write_bars(out.bars, path);
  const LoadResult scan = scan_bars(path, Frequency::Min15);
  CHECK(scan.issues.empty());
  CHECK(scan.series.size() == 4);
  // every day complete: align drops nothing
  for (const auto& [id, series] : scan.series) {
    const BarSeries aligned = align_to_calendar(series, out.calendar);
    CHECK(aligned.bars.size() == series.bars.size());
  }
}

TEST_CASE("synthgen: label distribution near-balanced on a large sample") {
  synthgen::SynthConfig cfg;
  cfg.n_instruments = 40;
  cfg.n_days = 260;  // ~10k labeled instances
  const auto out = synthgen::generate(cfg);
  std::vector<double> returns;
  for (const auto& [id, s] : out.bars) {
    for (const auto& [d, day] : group_by_day(s)) returns.push_back(daily_return(day));
  }
  REQUIRE(returns.size() >= 10000);
  const LabelScheme scheme = calibrate_labels(returns);
  std::array<int, 4> counts{};
  for (double r : returns) counts[static_cast<std::size_t>(classify(r, scheme))]++;
  for (int k = 0; k < 4; ++k) {
    const double frac = static_cast<double>(counts[static_cast<std::size_t>(k)]) /
                        static_cast<double>(returns.size());
    CHECK(frac > 0.22);
    CHECK(frac < 0.28);
  }
}

TEST_CASE("synthgen: zero signal decouples the functional from returns") {
  synthgen::SynthConfig cfg;
  cfg.n_instruments = 20;
  cfg.n_days = 120;
  cfg.signal_strength = 0.0;
  const auto out = synthgen::generate(cfg);
  REQUIRE(out.truth.size() > 2000);
  double sg = 0, sr = 0, sgg = 0, srr = 0, sgr = 0;
  const double n = static_cast<double>(out.truth.size());
  for (const auto& row : out.truth) {
    sg += row.functional;
    sr += row.planted_return;
    sgg += row.functional * row.functional;
    srr += row.planted_return * row.planted_return;
    sgr += row.functional * row.planted_return;
  }
  const double cov = sgr / n - (sg / n) * (sr / n);
  const double corr = cov / std::sqrt((sgg / n - sg / n * sg / n) *
                                      (srr / n - sr / n * sr / n));
  CHECK(std::abs(corr) < 0.05);
}

TEST_CASE("synthgen: full signal is recovered by thresholding the functional") {
  synthgen::SynthConfig cfg;
  cfg.n_instruments = 10;
  cfg.n_days = 120;
  cfg.signal_strength = 1.0;
  const auto out = synthgen::generate(cfg);
  REQUIRE(out.truth.size() > 1000);

  // quartile both columns; with full signal the class maps must agree
  std::vector<double> g, r;
  for (const auto& row : out.truth) {
    g.push_back(row.functional);
    r.push_back(row.planted_return);
  }
  const LabelScheme by_g = calibrate_labels(g);
  const LabelScheme by_r = calibrate_labels(r);
  std::size_t agree = 0;
  for (const auto& row : out.truth) {
    if (classify(row.functional, by_g) == classify(row.planted_return, by_r)) ++agree;
  }
  const double accuracy = static_cast<double>(agree) / static_cast<double>(out.truth.size());
  CHECK(accuracy > 0.9);
}

TEST_CASE("synthgen: truth rows line up with realized open-to-close returns") {
  synthgen::SynthConfig cfg;
  cfg.n_instruments = 2;
  cfg.n_days = 15;
  const auto out = synthgen::generate(cfg);
  for (const auto& row : out.truth) {
    const auto& series = out.bars.at(row.instrument_id);
    for (const auto& [d, day] : group_by_day(series)) {
      if (d != row.date) continue;
      // realized return differs from the planted one only by price quantization
      CHECK(daily_return(day) == doctest::Approx(row.planted_return).epsilon(2e-3));
    }
  }
}
