#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bars.hpp"
#include "scoring.hpp"

namespace stocksel::backtest {

struct FeeSchedule {
  double per_side = 0.001;  // fraction of traded notional, each side
};

struct SelectionRule {
  int max_positions = 20;
  double min_expected = 0.0014;  // 0.14%
};

struct Position {
  std::string instrument_id;
  double weight = 0;
};

struct TradeRecord {
  Date date;
  std::string instrument_id;
  double entry_price = 0;  // day open
  double exit_price = 0;   // day close
  double weight = 0;
  double gross_return = 0;
  double fee_paid = 0;  // as return fraction on the position
  double net_return = 0;
};

/// Open/close prints per instrument for one date.
struct DayQuote {
  double open = 0;
  double close = 0;
};
using DayQuotes = std::map<std::string, DayQuote>;

struct DayResult {
  double return_with_fee = 0;
  double return_fee_free = 0;
  std::vector<TradeRecord> trades;
  std::vector<std::string> skipped;  // instruments without bars, weight held as cash
};

struct Metrics {
  int transaction_count = 0;  // days with at least one position
  double winning_rate = 0;
  double profit_rate = 0;        // sum of gross trade contributions
  double fee_cost_rate = 0;      // sum of fee contributions
  double net_profit_rate = 0;    // profit_rate - fee_cost_rate
  double net_profit_compound = 0;  // final equity - 1
  double max_drawdown = 0;
  std::optional<double> interest_over_mdd;  // undefined when MDD == 0
  double baseline_simple_interest = 0;
};

struct BacktestReport {
  std::vector<Date> dates;
  std::vector<double> equity_with_fee;  // starts at 1.0 after the first day
  std::vector<double> equity_fee_free;
  std::vector<double> baseline;
  std::vector<TradeRecord> trades;
  std::vector<std::string> diagnostics;
  Metrics metrics;
};

/// Top min(max_positions, #scores with E >= threshold) instruments from a
/// ranked list, equal-weighted; an empty pick means a full-cash day.
std::vector<Position> select_portfolio(const std::vector<scoring::ExpectedReturnScore>& ranked,
                                       const SelectionRule& rule);

/// Buys at open, sells at close, pays the fee on both sides. Instruments
/// without a quote are skipped with their weight held as cash.
DayResult simulate_day(const std::vector<Position>& portfolio, Date date,
                       const DayQuotes& quotes, const FeeSchedule& fees);

/// Daily scores per date, already computed. Bars provide the trade prints
/// and the equal-weight universe baseline.
using ScoreStream = std::map<Date, std::vector<scoring::ExpectedReturnScore>>;

BacktestReport run_backtest(const ScoreStream& scores,
                            const std::map<std::string, BarSeries>& bars,
                            const SelectionRule& rule, const FeeSchedule& fees, Date begin,
                            Date end);

/// Winning rate, aggregate rates, MDD (streaming peak tracking), and the
/// interest/MDD ratio for a finished curve.
Metrics compute_metrics(const std::vector<double>& equity_with_fee,
                        const std::vector<TradeRecord>& trades,
                        const std::vector<double>& baseline);

struct OverlayRow {
  Date date;
  double strategy = 0;
  double baseline = 0;
};

/// Date-aligned (strategy, baseline) rows for plotting.
std::vector<OverlayRow> compare_baseline(const BacktestReport& report,
                                         const std::vector<Date>& baseline_dates,
                                         const std::vector<double>& baseline_values);

std::string metrics_csv(const Metrics& metrics, Date begin, Date end);
std::string equity_csv(const BacktestReport& report);
std::string trades_csv(const std::vector<TradeRecord>& trades);

}  // namespace stocksel::backtest
