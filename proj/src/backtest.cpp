#include "backtest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace stocksel::backtest {

std::vector<Position> select_portfolio(const std::vector<scoring::ExpectedReturnScore>& ranked,
                                       const SelectionRule& rule) {
  std::vector<Position> picks;
  for (const auto& s : ranked) {
    if (s.expected < rule.min_expected) continue;
    picks.push_back({s.instrument_id, 0.0});
    if (static_cast<int>(picks.size()) == rule.max_positions) break;
  }
  if (!picks.empty()) {
    const double w = 1.0 / static_cast<double>(picks.size());
    for (auto& p : picks) p.weight = w;
  }
  return picks;
}

DayResult simulate_day(const std::vector<Position>& portfolio, Date date,
                       const DayQuotes& quotes, const FeeSchedule& fees) {
  DayResult result;
  for (const auto& pos : portfolio) {
    const auto it = quotes.find(pos.instrument_id);
    if (it == quotes.end()) {
      result.skipped.push_back(pos.instrument_id);
      continue;
    }
    const DayQuote& q = it->second;
    if (q.open == 0.0) {
      result.skipped.push_back(pos.instrument_id);
      continue;
    }
    TradeRecord trade;
    trade.date = date;
    trade.instrument_id = pos.instrument_id;
    trade.entry_price = q.open;
    trade.exit_price = q.close;
    trade.weight = pos.weight;
    trade.gross_return = (q.close - q.open) / q.open;
    trade.fee_paid = 2.0 * fees.per_side;
    trade.net_return = trade.gross_return - trade.fee_paid;
    result.return_with_fee += pos.weight * trade.net_return;
    result.return_fee_free += pos.weight * trade.gross_return;
    result.trades.push_back(std::move(trade));
  }
  return result;
}

namespace {

DayQuotes day_quotes(const std::map<std::string, BarSeries>& bars, Date date) {
  DayQuotes quotes;
  for (const auto& [id, series] : bars) {
    const Bar* first = nullptr;
    const Bar* last = nullptr;
    for (const Bar& b : series.bars) {
      if (b.date != date) continue;
      if (!first) first = &b;
      last = &b;
    }
    if (first) quotes[id] = DayQuote{first->open, last->close};
  }
  return quotes;
}

}  // namespace

BacktestReport run_backtest(const ScoreStream& scores,
                            const std::map<std::string, BarSeries>& bars,
                            const SelectionRule& rule, const FeeSchedule& fees, Date begin,
                            Date end) {
  const TradingCalendar cal = TradingCalendar::from_data(bars);
  std::vector<Date> dates;
  for (Date d : cal.dates()) {
    if (d >= begin && d <= end) dates.push_back(d);
  }
  if (dates.empty()) {
    throw Error(ErrorKind::EmptyRange, "no trading dates in " + begin.iso() + ".." + end.iso());
  }

  BacktestReport report;
  double equity = 1.0, equity_free = 1.0, base = 1.0;
  for (Date d : dates) {
    const DayQuotes quotes = day_quotes(bars, d);

    std::vector<Position> portfolio;
    if (const auto it = scores.find(d); it != scores.end()) {
      portfolio = select_portfolio(scoring::rank_candidates(it->second), rule);
    }
    DayResult day = simulate_day(portfolio, d, quotes, fees);
    equity *= 1.0 + day.return_with_fee;
    equity_free *= 1.0 + day.return_fee_free;
    for (auto& t : day.trades) report.trades.push_back(std::move(t));
    for (const auto& id : day.skipped) {
      report.diagnostics.push_back(d.iso() + " " + id + ": no bars, weight held as cash");
    }

    // equal-weight universe baseline, fee-free
    double base_ret = 0.0;
    if (!quotes.empty()) {
      for (const auto& [id, q] : quotes) {
        if (q.open != 0.0) base_ret += (q.close - q.open) / q.open;
      }
      base_ret /= static_cast<double>(quotes.size());
    }
    base *= 1.0 + base_ret;

    report.dates.push_back(d);
    report.equity_with_fee.push_back(equity);
    report.equity_fee_free.push_back(equity_free);
    report.baseline.push_back(base);
  }

  report.metrics = compute_metrics(report.equity_with_fee, report.trades, report.baseline);
  return report;
}

Metrics compute_metrics(const std::vector<double>& equity_with_fee,
                        const std::vector<TradeRecord>& trades,
                        const std::vector<double>& baseline) {
  if (equity_with_fee.empty()) throw Error(ErrorKind::EmptyCurve, "empty equity curve");

  Metrics m;
  std::size_t wins = 0;
  std::set<std::int32_t> trade_days;
  for (const auto& t : trades) {
    if (t.net_return > 0) ++wins;
    m.profit_rate += t.weight * t.gross_return;
    m.fee_cost_rate += t.weight * t.fee_paid;
    trade_days.insert(t.date.serial);
  }
  m.transaction_count = static_cast<int>(trade_days.size());
  m.winning_rate = trades.empty() ? 0.0 : static_cast<double>(wins) / trades.size();
  m.net_profit_rate = m.profit_rate - m.fee_cost_rate;
  m.net_profit_compound = equity_with_fee.back() - 1.0;

  double peak = equity_with_fee.front();
  double mdd = 0.0;
  for (double e : equity_with_fee) {
    peak = std::max(peak, e);
    mdd = std::max(mdd, (peak - e) / peak);
  }
  m.max_drawdown = mdd;
  if (mdd > 0.0) m.interest_over_mdd = m.net_profit_rate / mdd;

  if (!baseline.empty() && baseline.front() != 0.0) {
    m.baseline_simple_interest = (baseline.back() - baseline.front()) / baseline.front();
  }
  return m;
}

std::vector<OverlayRow> compare_baseline(const BacktestReport& report,
                                         const std::vector<Date>& baseline_dates,
                                         const std::vector<double>& baseline_values) {
  if (baseline_dates.size() != baseline_values.size() ||
      baseline_dates.size() != report.dates.size()) {
    throw Error(ErrorKind::MisalignedDates, "baseline length differs from report");
  }
  std::vector<OverlayRow> rows;
  for (std::size_t i = 0; i < report.dates.size(); ++i) {
    if (baseline_dates[i] != report.dates[i]) {
      throw Error(ErrorKind::MisalignedDates,
                  baseline_dates[i].iso() + " vs " + report.dates[i].iso());
    }
    rows.push_back({report.dates[i], report.equity_with_fee[i], baseline_values[i]});
  }
  return rows;
}

namespace {
std::string format_g10(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}
}  // namespace

std::string metrics_csv(const Metrics& m, Date begin, Date end) {
  std::string out = "metric,value\n";
  out += "time_begin," + begin.iso() + "\n";
  out += "time_end," + end.iso() + "\n";
  out += "baseline_simple_interest," + format_g10(m.baseline_simple_interest) + "\n";
  out += "transaction_number," + std::to_string(m.transaction_count) + "\n";
  out += "winning_rate," + format_g10(m.winning_rate) + "\n";
  out += "profit_in_rate," + format_g10(m.profit_rate) + "\n";
  out += "fee_cost_in_rate," + format_g10(m.fee_cost_rate) + "\n";
  out += "net_profit_in_rate," + format_g10(m.net_profit_rate) + "\n";
  out += "net_profit_compounded," + format_g10(m.net_profit_compound) + "\n";
  out += "max_drawdown_in_rate," + format_g10(m.max_drawdown) + "\n";
  out += "interest_over_mdd," +
         (m.interest_over_mdd ? format_g10(*m.interest_over_mdd) : std::string("undefined")) +
         "\n";
  return out;
}

std::string equity_csv(const BacktestReport& report) {
  std::string out = "date,equity_with_fee,equity_fee_free,baseline\n";
  for (std::size_t i = 0; i < report.dates.size(); ++i) {
    out += report.dates[i].iso();
    out += ',';
    out += format_g10(report.equity_with_fee[i]);
    out += ',';
    out += format_g10(report.equity_fee_free[i]);
    out += ',';
    out += format_g10(report.baseline[i]);
    out += '\n';
  }
  return out;
}

std::string trades_csv(const std::vector<TradeRecord>& trades) {
  std::string out = "date,instrument,entry,exit,weight,gross_return,fee,net_return\n";
  for (const auto& t : trades) {
    out += t.date.iso();
    out += ',';
    out += t.instrument_id;
    out += ',';
    out += format_g10(t.entry_price);
    out += ',';
    out += format_g10(t.exit_price);
    out += ',';
    out += format_g10(t.weight);
    out += ',';
    out += format_g10(t.gross_return);
    out += ',';
    out += format_g10(t.fee_paid);
    out += ',';
    out += format_g10(t.net_return);
    out += '\n';
  }
  return out;
}

}  // namespace stocksel::backtest
