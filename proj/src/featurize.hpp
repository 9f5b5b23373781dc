#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bars.hpp"
#include "tensor.hpp"

namespace stocksel {

enum class WindowKind { S, L, Cnn5d };

const char* to_string(WindowKind kind);
WindowKind window_kind_from_string(const std::string& text);

/// steps per window: S = 16 (one day of 15-min bars), L = 20 (ten days of
/// 120-min bars), Cnn5d = 80 (five days of 15-min bars).
int window_steps(WindowKind kind);
/// prior complete days required before the as-of date.
int window_history_days(WindowKind kind);
Frequency window_frequency(WindowKind kind);

struct FeatureWindow {
  std::string instrument_id;
  Date as_of_date;  // the day whose return is predicted
  WindowKind kind = WindowKind::S;
  nn::Tensor matrix;  // steps x 11, min-max normalized
};

/// Three cut points plus the per-class mean yields used for expected-return
/// scoring. Classes: 0 FallSharply, 1 FallSlightly, 2 RiseSlightly,
/// 3 RiseSharply.
struct LabelScheme {
  double q1 = 0, q2 = 0, q3 = 0;
  std::array<double, 4> class_mean_yield{};
  std::string sample_descriptor;
};

inline constexpr int kNumClasses = 4;
inline constexpr const char* kClassNames[kNumClasses] = {"FallSharply", "FallSlightly",
                                                         "RiseSlightly", "RiseSharply"};

struct LabeledInstance {
  FeatureWindow window;
  int label = 0;
  double realized_return = 0;  // backtest truth and scoring calibration
};

using Dataset = std::vector<LabeledInstance>;

struct SplitSpec {
  Date train_begin, train_end;
  Date test_begin, test_end;
};

struct SplitResult {
  Dataset train, test;
  SplitSpec spec;
};

/// (last close - first open) / first open over one complete day.
double daily_return(std::span<const Bar> day);

/// Quartile cut points (25/50/75th percentiles, linear interpolation between
/// closest order statistics) and per-class mean yields over the sample.
LabelScheme calibrate_labels(std::vector<double> returns, std::string sample_descriptor = {});

/// r < q1 -> 0; q1 <= r < q2 -> 1; q2 <= r < q3 -> 2; r >= q3 -> 3.
int classify(double r, const LabelScheme& scheme);

/// Per-column min-max over the window's own time index; constant columns
/// map to all-zero.
nn::Tensor normalize_window(const nn::Tensor& raw);

/// Builds normalized, labeled windows for every (instrument, date) with
/// enough consecutive history; windows crossing suspension gaps are skipped.
/// The map's series must be aligned and carry the kind's frequency.
std::vector<LabeledInstance> build_windows(const std::map<std::string, BarSeries>& series,
                                           WindowKind kind, const TradingCalendar& cal,
                                           const LabelScheme& scheme);

/// Splits on distinct as-of dates: floor(frac * #dates) train dates, the
/// rest test. Instance order does not affect the outcome.
SplitResult chronological_split(const Dataset& instances, double frac = 0.8);

/// Key-value text serialization (q1, q2, q3, w0..w3) so trained artifacts
/// are reproducible.
std::string serialize_scheme(const LabelScheme& scheme);
LabelScheme parse_scheme(const std::string& text);
void write_scheme(const LabelScheme& scheme, const std::filesystem::path& path);
LabelScheme read_scheme(const std::filesystem::path& path);

}  // namespace stocksel
