// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Oracles here are independent re-implementations kept local to
// this binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "backtest.hpp"
#include "config.hpp"
#include "featurize.hpp"
#include "models.hpp"
#include "pipeline.hpp"
#include "scoring.hpp"
#include "synthgen.hpp"

using namespace stocksel;
using nn::Parameter;
using nn::Tape;
using nn::Tensor;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
  std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double secs_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Tensor random_tensor(std::size_t rows, std::size_t cols, rng::Rng& rng, double scale = 1.0) {
  Tensor t(rows, cols);
  for (double& x : t.values()) x = rng.uniform(-scale, scale);
  return t;
}

// ---------------------------------------------------------------------------
// criterion 1: analytic gradients vs central finite differences
// ---------------------------------------------------------------------------

template <typename BuildLoss>
double worst_gradcheck_error(std::vector<Parameter*> params, BuildLoss&& build) {
  for (Parameter* p : params) p->zero_grad();
  Tape tape;
  tape.backward(build(tape));
  double worst = 0;
  for (Parameter* p : params) {
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double h = 1e-5;
      const double orig = p->value.values()[i];
      p->value.values()[i] = orig + h;
      Tape tp;
      const double up = tp.value(build(tp)).at(0, 0);
      p->value.values()[i] = orig - h;
      Tape tm;
      const double dn = tm.value(build(tm)).at(0, 0);
      p->value.values()[i] = orig;
      const double fd = (up - dn) / (2 * h);
      const double an = p->grad.values()[i];
      const double err = std::abs(fd - an) / std::max({1.0, std::abs(fd), std::abs(an)});
      worst = std::max(worst, err);
    }
  }
  return worst;
}

bool criterion1_gradients() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (int seed = 0; seed < 20; ++seed) {
    rng::Rng init(rng::derive(1001, "gradcheck", static_cast<std::uint64_t>(seed)));

    {  // dense through softmax + cross-entropy (covers both at once)
      nn::DenseParams dense(5, 4, init, "d");
      const Tensor x = random_tensor(3, 5, init);
      Tensor y(3, 4);
      y.at(0, 1) = y.at(1, 0) = y.at(2, 3) = 1.0;
      auto params = dense.parameters();
      worst = std::max(worst, worst_gradcheck_error(params, [&](Tape& t) {
        return t.cross_entropy(t.softmax_rows(nn::dense(t, t.input(x), dense)), y);
      }));
    }
    {  // conv 1xF
      nn::Conv1xFParams conv(6, 11, init);
      const Tensor x = random_tensor(7, 11, init);
      auto params = conv.parameters();
      worst = std::max(worst, worst_gradcheck_error(params, [&](Tape& t) {
        return t.sum_squares(nn::conv_1xf(t, t.input(x), conv));
      }));
    }
    {  // lstm cell
      nn::LstmCellParams cell(4, 5, init);
      const Tensor x = random_tensor(2, 4, init);
      const Tensor h0 = random_tensor(2, 5, init);
      const Tensor c0 = random_tensor(2, 5, init);
      auto params = cell.parameters();
      worst = std::max(worst, worst_gradcheck_error(params, [&](Tape& t) {
        const auto nodes = nn::bind_lstm(t, cell);
        const auto [h, c] = nn::lstm_cell(t, t.input(x), t.input(h0), t.input(c0), nodes);
        return t.sum_squares(h);
      }));
    }
    {  // softmax + cross-entropy with the scores as the parameter
      Parameter scores("s", random_tensor(4, 4, init, 2.0));
      Tensor y(4, 4);
      for (int r = 0; r < 4; ++r) y.at(r, (r * 2 + 1) % 4) = 1.0;
      std::vector<Parameter*> params{&scores};
      worst = std::max(worst, worst_gradcheck_error(params, [&](Tape& t) {
        return t.cross_entropy(t.softmax_rows(t.param(scores)), y);
      }));
    }
    {  // l2 penalty
      Parameter w("w", random_tensor(4, 6, init, 2.0));
      std::vector<Parameter*> params{&w};
      const double lambda = 0.37;
      const double n = static_cast<double>(w.value.size());
      worst = std::max(worst, worst_gradcheck_error(params, [&](Tape& t) {
        return t.scale(t.sum_squares(t.param(w)), lambda / (2.0 * n));
      }));
    }
  }
  const double elapsed = secs_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "gradient checks, 20 seeds x 5 layer kinds, worst rel err %.3g (%.1fs)", worst,
                elapsed);
  const bool pass = worst < 1e-4 && elapsed < 60.0;
  report(1, pass, buf);
  return pass;
}

// ---------------------------------------------------------------------------
// criterion 2: cell equations vs straight-line transcription oracle
// ---------------------------------------------------------------------------

bool criterion2_lstm_fidelity() {
  rng::Rng rng(2002);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n_in = 1 + rng.below(8);
    const std::size_t n_h = 1 + rng.below(8);
    rng::Rng init(rng.next_u64());
    nn::LstmCellParams p(n_in, n_h, init);
    std::vector<double> x(n_in), h(n_h), c(n_h);
    for (double& v : x) v = rng.uniform(-2, 2);
    for (double& v : h) v = rng.uniform(-2, 2);
    for (double& v : c) v = rng.uniform(-2, 2);

    const auto [h_t, c_t] =
        nn::lstm_cell_forward(Tensor::row(x), Tensor::row(h), Tensor::row(c), p);

    auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    for (std::size_t j = 0; j < n_h; ++j) {
      auto pre = [&](const Tensor& wx, const Tensor& wh, const Tensor& b) {
        double s = b.at(0, j);
        for (std::size_t i = 0; i < n_in; ++i) s += wx.at(i, j) * x[i];
        for (std::size_t i = 0; i < n_h; ++i) s += wh.at(i, j) * h[i];
        return s;
      };
      const double i_t = sig(pre(p.w_xi.value, p.w_hi.value, p.b_i.value));
      const double f_t = sig(pre(p.w_xf.value, p.w_hf.value, p.b_f.value));
      const double o_t = sig(pre(p.w_xo.value, p.w_ho.value, p.b_o.value));
      const double g_t = std::tanh(pre(p.w_xg.value, p.w_hg.value, p.b_g.value));
      const double c_ref = f_t * c[j] + i_t * g_t;
      const double h_ref = o_t * std::tanh(c_ref);
      worst = std::max(worst, std::abs(c_t.at(0, j) - c_ref));
      worst = std::max(worst, std::abs(h_t.at(0, j) - h_ref));
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "lstm cell vs equation transcription, max |diff| %.3g", worst);
  const bool pass = worst < 1e-12;
  report(2, pass, buf);
  return pass;
}

// ---------------------------------------------------------------------------
// criterion 3: min-max normalization property suite
// ---------------------------------------------------------------------------

bool criterion3_normalization() {
  rng::Rng rng(3003);
  bool ok = true;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    Tensor m(16, 11);
    for (double& x : m.values()) x = rng.uniform(-1e3, 1e3);
    for (std::size_t r = 0; r < m.rows(); ++r) m.at(r, 2) = 42.5;  // constant column
    const Tensor out = normalize_window(m);
    for (std::size_t r = 0; r < out.rows(); ++r) {
      ok = ok && out.at(r, 2) == 0.0;
      for (std::size_t c = 0; c < out.cols(); ++c) {
        ok = ok && out.at(r, c) >= 0.0 && out.at(r, c) <= 1.0;
      }
    }
    const Tensor twice = normalize_window(out);
    for (std::size_t i = 0; i < out.size(); ++i) {
      ok = ok && std::abs(twice.values()[i] - out.values()[i]) < 1e-12;
    }
    Tensor scaled = m;
    const double a = rng.uniform(0.01, 50), b = rng.uniform(-500, 500);
    for (std::size_t r = 0; r < m.rows(); ++r) scaled.at(r, 5) = a * m.at(r, 5) + b;
    const Tensor out2 = normalize_window(scaled);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      ok = ok && std::abs(out2.at(r, 5) - out.at(r, 5)) < 1e-9;
    }
  }
  report(3, ok, "normalization: range, zero branch, idempotence, affine invariance");
  return ok;
}

// ---------------------------------------------------------------------------
// criterion 4: quartile labeling vs sort-based oracle
// ---------------------------------------------------------------------------

bool criterion4_quartiles() {
  rng::Rng rng(4004);
  double worst = 0;
  bool balance_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 100 + static_cast<int>(rng.below(300));
    std::vector<double> returns;
    for (int i = 0; i < n; ++i) returns.push_back(rng.normal() * 0.02);
    const LabelScheme scheme = calibrate_labels(returns);

    std::vector<double> sorted = returns;
    std::sort(sorted.begin(), sorted.end());
    auto oracle = [&](double p) {
      const double h = p * static_cast<double>(sorted.size() - 1);
      const std::size_t lo = static_cast<std::size_t>(h);
      if (lo + 1 >= sorted.size()) return sorted.back();
      return sorted[lo] + (h - lo) * (sorted[lo + 1] - sorted[lo]);
    };
    worst = std::max(worst, std::abs(scheme.q1 - oracle(0.25)));
    worst = std::max(worst, std::abs(scheme.q2 - oracle(0.50)));
    worst = std::max(worst, std::abs(scheme.q3 - oracle(0.75)));

    int counts[4] = {0, 0, 0, 0};
    for (double r : returns) counts[classify(r, scheme)]++;
    for (int k = 0; k < 4; ++k) {
      balance_ok = balance_ok && std::abs(counts[k] - n / 4.0) <= 2.0;
    }
  }
  char buf[140];
  std::snprintf(buf, sizeof buf,
                "quartile cuts vs sort oracle (max |diff| %.3g), class balance within +-2",
                worst);
  const bool pass = worst < 1e-12 && balance_ok;
  report(4, pass, buf);
  return pass;
}

// ---------------------------------------------------------------------------
// criterion 5: learnability of the planted signal
// ---------------------------------------------------------------------------

struct LearnabilityOutcome {
  double lstm_acc = 0;
  double cnn_acc = 0;
};

LearnabilityOutcome run_learnability(double signal, int lstm_epochs, int cnn_epochs) {
  synthgen::SynthConfig sc;
  sc.seed = 505050;
  sc.n_instruments = 50;
  sc.n_days = 300;
  sc.signal_strength = signal;
  const synthgen::SynthOutput data = synthgen::generate(sc);

  // chronological 80/20 on distinct dates
  const auto& dates = data.calendar.dates();
  const std::size_t n_train_dates = static_cast<std::size_t>(0.8 * dates.size());
  const Date cutoff = dates[n_train_dates - 1];

  std::vector<double> train_returns;
  for (const auto& [id, s] : data.bars) {
    for (const auto& [d, day] : group_by_day(s)) {
      if (d <= cutoff) train_returns.push_back(daily_return(day));
    }
  }
  const LabelScheme scheme = calibrate_labels(train_returns);

  auto split = [&](const Dataset& all) {
    std::pair<Dataset, Dataset> out;
    for (const auto& inst : all) {
      (inst.window.as_of_date <= cutoff ? out.first : out.second).push_back(inst);
    }
    return out;
  };

  LearnabilityOutcome outcome;
  {
    const Dataset all = build_windows(data.bars, WindowKind::S, data.calendar, scheme);
    const auto [train_set, test_set] = split(all);
    models::TrainConfig tc;
    tc.epochs = lstm_epochs;
    tc.early_stop_epoch = lstm_epochs;
    tc.seed = rng::derive(sc.seed, "model", 0);
    rng::Rng init(rng::derive(tc.seed, "init"));
    models::LstmClassifierConfig mc;
    auto model = models::build_classifier(mc, init);
    const auto trained = models::train(*model, train_set, test_set, tc, scheme);
    outcome.lstm_acc = trained.log.back().test_accuracy;
  }
  {
    const Dataset all = build_windows(data.bars, WindowKind::Cnn5d, data.calendar, scheme);
    const auto [train_set, test_set] = split(all);
    models::TrainConfig tc;
    tc.epochs = cnn_epochs;
    tc.early_stop_epoch = cnn_epochs;
    tc.seed = rng::derive(sc.seed, "model", 2);
    rng::Rng init(rng::derive(tc.seed, "init"));
    models::CnnClassifierConfig mc;
    auto model = models::build_classifier(mc, init);
    const auto trained = models::train(*model, train_set, test_set, tc, scheme);
    outcome.cnn_acc = trained.log.back().test_accuracy;
  }
  return outcome;
}

bool criterion5_learnability() {
  const auto t0 = std::chrono::steady_clock::now();
  const LearnabilityOutcome strong = run_learnability(0.8, 4, 3);
  const LearnabilityOutcome null = run_learnability(0.0, 2, 1);
  const double elapsed = secs_since(t0);

  const bool pass = strong.lstm_acc >= 0.35 && strong.cnn_acc >= 0.35 &&
                    std::abs(null.lstm_acc - 0.25) <= 0.03 &&
                    std::abs(null.cnn_acc - 0.25) <= 0.03 && elapsed < 900.0;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "learnability: signal 0.8 lstm %.3f cnn %.3f (need >= 0.35); signal 0 lstm "
                "%.3f cnn %.3f (need 0.25 +- 0.03); %.0fs",
                strong.lstm_acc, strong.cnn_acc, null.lstm_acc, null.cnn_acc, elapsed);
  report(5, pass, buf);
  return pass;
}

// ---------------------------------------------------------------------------
// criterion 6: ensemble scorer vs dot-product oracle
// ---------------------------------------------------------------------------

bool criterion6_scorer() {
  rng::Rng rng(6006);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    LabelScheme scheme;
    scheme.q1 = -0.01;
    scheme.q2 = 0.0;
    scheme.q3 = 0.01;
    double w = rng.uniform(-0.05, -0.02);
    for (int k = 0; k < 4; ++k) {
      scheme.class_mean_yield[k] = w;
      w += rng.uniform(0.005, 0.03);
    }
    auto draw_probs = [&] {
      std::array<double, 4> p{};
      double sum = 0;
      for (double& x : p) {
        x = rng.uniform(1e-3, 1.0);
        sum += x;
      }
      for (double& x : p) x /= sum;
      return p;
    };
    const auto pa = draw_probs();
    const auto pb = draw_probs();
    scoring::ClassProbabilities a{"X", Date::from_ymd(2021, 5, 3), pa, "S"};
    scoring::ClassProbabilities b{"X", Date::from_ymd(2021, 5, 3), pb, "L"};

    const auto one = scoring::expected_return(std::vector{a}, scheme);
    double dot = 0;
    for (int k = 0; k < 4; ++k) dot += pa[k] * scheme.class_mean_yield[k];
    worst = std::max(worst, std::abs(one.expected - dot));

    const auto two = scoring::expected_return(std::vector{a, b}, scheme);
    double half_sum = 0;
    for (int k = 0; k < 4; ++k) {
      half_sum += 0.5 * (pa[k] + pb[k]) * scheme.class_mean_yield[k];
    }
    worst = std::max(worst, std::abs(two.expected - half_sum));
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "expected-return scorer vs oracle, max |diff| %.3g", worst);
  const bool pass = worst < 1e-12;
  report(6, pass, buf);
  return pass;
}

// ---------------------------------------------------------------------------
// criterion 7: backtest engine vs scalar re-simulation, MDD, fee monotonicity
// ---------------------------------------------------------------------------

bool criterion7_backtest() {
  rng::Rng rng(7007);
  double worst_equity = 0, worst_mdd = 0;
  bool fees_monotone = true;

  for (int run = 0; run < 100; ++run) {
    const int n_days = 8 + static_cast<int>(rng.below(10));
    const int n_inst = 3 + static_cast<int>(rng.below(6));
    std::map<std::string, BarSeries> bars;
    backtest::ScoreStream scores;
    std::vector<Date> dates;
    std::map<std::string, std::map<std::int32_t, double>> returns;

    Date d = Date::from_ymd(2021, 6, 1);
    for (int day = 0; day < n_days; ++day) {
      while (d.is_weekend()) d = d.plus_days(1);
      dates.push_back(d);
      for (int i = 0; i < n_inst; ++i) {
        const std::string id = "I" + std::to_string(i);
        const double r = rng.uniform(-0.04, 0.04);
        returns[id][d.serial] = r;
        auto& series = bars[id];
        series.instrument_id = id;
        series.frequency = Frequency::Min15;
        const double open = 20.0, close = open * (1.0 + r);
        const auto& ends = TradingCalendar::bucket_ends(Frequency::Min15);
        for (std::size_t k = 0; k < ends.size(); ++k) {
          Bar b;
          b.date = d;
          b.minute_of_day = ends[k];
          b.open = k == 0 ? open : close;
          b.close = close;
          b.high = std::max(b.open, b.close);
          b.low = std::min(b.open, b.close);
          b.volume = 100;
          b.amount = 1000;
          b.num_transactions = 1;
          series.bars.push_back(b);
        }
        if (rng.uniform01() < 0.8) {
          scoring::ExpectedReturnScore s;
          s.instrument_id = id;
          s.as_of_date = d;
          s.expected = rng.uniform(-0.02, 0.04);
          scores[d].push_back(s);
        }
      }
      d = d.plus_days(1);
    }

    const backtest::SelectionRule rule{4, 0.0014};
    double prev_net = 1e18;
    for (const double fee : {0.0, 0.0005, 0.001, 0.002}) {
      const auto report = backtest::run_backtest(scores, bars, rule, backtest::FeeSchedule{fee},
                                                 dates.front(), dates.back());
      // scalar re-simulation
      double equity = 1.0;
      for (std::size_t di = 0; di < dates.size(); ++di) {
        const Date date = dates[di];
        std::vector<scoring::ExpectedReturnScore> day_scores;
        if (scores.count(date)) day_scores = scores.at(date);
        std::sort(day_scores.begin(), day_scores.end(), [](const auto& a, const auto& b) {
          if (a.expected != b.expected) return a.expected > b.expected;
          return a.instrument_id < b.instrument_id;
        });
        std::vector<std::string> picked;
        for (const auto& s : day_scores) {
          if (s.expected >= rule.min_expected &&
              static_cast<int>(picked.size()) < rule.max_positions) {
            picked.push_back(s.instrument_id);
          }
        }
        double day_ret = 0;
        if (!picked.empty()) {
          const double w = 1.0 / static_cast<double>(picked.size());
          for (const auto& id : picked) day_ret += w * (returns[id][date.serial] - 2 * fee);
        }
        equity *= 1.0 + day_ret;
        worst_equity = std::max(worst_equity,
                                std::abs(report.equity_with_fee[di] - equity));
      }
      // brute-force MDD over all (peak, trough) pairs
      double brute = 0;
      for (std::size_t i = 0; i < report.equity_with_fee.size(); ++i) {
        for (std::size_t j = i; j < report.equity_with_fee.size(); ++j) {
          brute = std::max(brute, (report.equity_with_fee[i] - report.equity_with_fee[j]) /
                                      report.equity_with_fee[i]);
        }
      }
      worst_mdd = std::max(worst_mdd, std::abs(report.metrics.max_drawdown - brute));
      fees_monotone = fees_monotone && report.metrics.net_profit_rate <= prev_net + 1e-12;
      prev_net = report.metrics.net_profit_rate;
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "backtest: equity vs re-simulation %.3g, mdd vs brute force %.3g, fee grid "
                "monotone %s",
                worst_equity, worst_mdd, fees_monotone ? "yes" : "no");
  const bool pass = worst_equity < 1e-12 && worst_mdd < 1e-12 && fees_monotone;
  report(7, pass, buf);
  return pass;
}

// ---------------------------------------------------------------------------
// criterion 8: selection rule fidelity
// ---------------------------------------------------------------------------

bool criterion8_rule() {
  rng::Rng rng(8008);
  bool ok = true;
  const backtest::SelectionRule rule{20, 0.0014};
  for (int trial = 0; trial < 2000 && ok; ++trial) {
    std::vector<scoring::ExpectedReturnScore> scores;
    const int n = static_cast<int>(rng.below(80));
    for (int i = 0; i < n; ++i) {
      scoring::ExpectedReturnScore s;
      s.instrument_id = "I" + std::to_string(i);
      s.as_of_date = Date::from_ymd(2021, 7, 1);
      // mass near the threshold to stress the boundary
      s.expected = rng.uniform01() < 0.3 ? 0.0014 + rng.uniform(-2e-4, 2e-4)
                                         : rng.uniform(-0.05, 0.05);
      scores.push_back(std::move(s));
    }
    std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
      if (a.expected != b.expected) return a.expected > b.expected;
      return a.instrument_id < b.instrument_id;
    });
    const auto picks = backtest::select_portfolio(scores, rule);
    ok = ok && picks.size() <= 20;
    std::set<std::string> picked;
    for (const auto& p : picks) picked.insert(p.instrument_id);
    int qualifying = 0;
    for (const auto& s : scores) {
      if (s.expected >= rule.min_expected) ++qualifying;
      if (s.expected < rule.min_expected && picked.count(s.instrument_id)) ok = false;
    }
    ok = ok && static_cast<int>(picks.size()) == std::min(20, qualifying);
  }
  report(8, ok, "selection rule: never > 20 positions, never below the 0.14% threshold");
  return ok;
}

// ---------------------------------------------------------------------------
// criterion 9: end-to-end determinism
// ---------------------------------------------------------------------------

bool criterion9_determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "stocksel_acceptance_det";
  fs::remove_all(root);
  fs::create_directories(root);

  auto run = [&](const std::string& out) {
    RunConfig cfg = RunConfig::defaults();
    cfg.set("run.out", (root / out).string());
    cfg.set("synth.instruments", "6");
    cfg.set("synth.days", "40");
    cfg.set("train.epochs", "3");
    cfg.set("train.checkpoint_epoch", "2");
    cfg.set("model.hidden_size", "8");
    pipeline::cmd_pipeline(cfg);
  };
  run("a");
  run("b");

  bool ok = true;
  std::string detail;
  for (const char* name :
       {"bars.csv", "truth.csv", "universe.txt", "labels.txt", "train_log_S.csv",
        "train_log_L.csv", "confusion_S.csv", "confusion_L.csv", "scores.csv", "equity.csv",
        "metrics.csv", "trades.csv", "model_S.ckpt", "model_L.ckpt"}) {
    auto slurp = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const std::string a = slurp(root / "a" / name);
    const std::string b = slurp(root / "b" / name);
    if (a.empty() || a != b) {
      ok = false;
      detail = std::string(" (mismatch: ") + name + ")";
      break;
    }
  }
  fs::remove_all(root);
  report(9, ok, "two pipeline runs produce byte-identical outputs" + detail);
  return ok;
}

// ---------------------------------------------------------------------------
// criterion 10: checkpoint-truncation equivalence
// ---------------------------------------------------------------------------

bool criterion10_truncation() {
  synthgen::SynthConfig sc;
  sc.seed = 1010;
  sc.n_instruments = 4;
  sc.n_days = 30;
  const synthgen::SynthOutput data = synthgen::generate(sc);
  std::vector<double> returns;
  for (const auto& [id, s] : data.bars) {
    for (const auto& [d, day] : group_by_day(s)) returns.push_back(daily_return(day));
  }
  const LabelScheme scheme = calibrate_labels(returns);
  const Dataset all = build_windows(data.bars, WindowKind::S, data.calendar, scheme);
  const SplitResult split = chronological_split(all, 0.8);

  models::LstmClassifierConfig mc;
  mc.hidden_size = 8;

  models::TrainConfig long_run;
  long_run.epochs = 50;
  long_run.early_stop_epoch = 20;
  long_run.seed = 424242;
  models::TrainConfig short_run = long_run;
  short_run.epochs = 20;

  rng::Rng init_a(rng::derive(long_run.seed, "init"));
  auto model_a = models::build_classifier(mc, init_a);
  const auto trained_a = models::train(*model_a, split.train, split.test, long_run, scheme);

  rng::Rng init_b(rng::derive(short_run.seed, "init"));
  auto model_b = models::build_classifier(mc, init_b);
  const auto trained_b = models::train(*model_b, split.train, split.test, short_run, scheme);

  bool ok = trained_a.checkpoint.tensors.size() == trained_b.checkpoint.tensors.size();
  if (ok) {
    for (std::size_t i = 0; i < trained_a.checkpoint.tensors.size(); ++i) {
      ok = ok && trained_a.checkpoint.tensors[i].first == trained_b.checkpoint.tensors[i].first;
      ok = ok &&
           trained_a.checkpoint.tensors[i].second == trained_b.checkpoint.tensors[i].second;
    }
  }
  // the serialized containers must agree byte for byte as well
  ok = ok && nn::serialize_checkpoint(trained_a.checkpoint) ==
                 nn::serialize_checkpoint(trained_b.checkpoint);
  report(10, ok, "epoch-20 checkpoint of a 50-epoch run bitwise equals a 20-epoch run");
  return ok;
}

}  // namespace

int main() {
  std::printf("stocksel acceptance suite\n");
  criterion1_gradients();
  criterion2_lstm_fidelity();
  criterion3_normalization();
  criterion4_quartiles();
  criterion5_learnability();
  criterion6_scorer();
  criterion7_backtest();
  criterion8_rule();
  criterion9_determinism();
  criterion10_truncation();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
