#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "backtest.hpp"
#include "featurize.hpp"
#include "models.hpp"
#include "scoring.hpp"
#include "svg.hpp"
#include "synthgen.hpp"

namespace stocksel::pipeline {

namespace {

void require_file(const std::filesystem::path& p, const std::string& what) {
  if (!std::filesystem::exists(p)) {
    throw Error(ErrorKind::InvalidConfig, what + " not found: " + p.string());
  }
}

void ensure_parent(const std::filesystem::path& p) {
  const auto dir = p.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  ensure_parent(p);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + p.string());
  out << text;
}

struct PreparedData {
  std::map<std::string, BarSeries> bars15;   // aligned, complete days only
  std::map<std::string, BarSeries> bars120;  // resampled from bars15
  TradingCalendar cal;
};

PreparedData prepare_data(const RunConfig& cfg, bool need_120min) {
  const auto bars_path = cfg.path("paths.bars");
  require_file(bars_path, "bar data");
  auto raw = load_bars(bars_path, Frequency::Min15);
  PreparedData data;
  data.cal = TradingCalendar::from_data(raw);
  for (auto& [id, series] : raw) {
    BarSeries aligned = align_to_calendar(series, data.cal);
    if (aligned.bars.empty()) continue;
    if (need_120min) data.bars120.emplace(id, resample_to_120min(aligned));
    data.bars15.emplace(id, std::move(aligned));
  }
  if (data.bars15.empty()) throw Error(ErrorKind::EmptyInput, "no complete trading days");
  return data;
}

std::vector<Date> data_dates(const PreparedData& data) {
  std::set<Date> dates;
  for (const auto& [id, s] : data.bars15) {
    for (const auto& [d, day] : group_by_day(s)) dates.insert(d);
  }
  return {dates.begin(), dates.end()};
}

struct DateRange {
  Date begin, end;
};

/// Train/test ranges: explicit [split] dates when given, else the first
/// floor(train_fraction * #dates) distinct data dates train, rest test.
std::pair<DateRange, DateRange> split_ranges(const RunConfig& cfg, const PreparedData& data) {
  const auto tb = cfg.get_date("split.train_begin");
  const auto te = cfg.get_date("split.train_end");
  const auto sb = cfg.get_date("split.test_begin");
  const auto se = cfg.get_date("split.test_end");
  if (tb && te && sb && se) {
    if (!(*te < *sb)) throw Error(ErrorKind::InvalidConfig, "train range must precede test range");
    return {{*tb, *te}, {*sb, *se}};
  }
  if (tb || te || sb || se) {
    throw Error(ErrorKind::InvalidConfig, "set all four split dates or none");
  }
  const std::vector<Date> dates = data_dates(data);
  if (dates.size() < 2) throw Error(ErrorKind::TooFewDates, "need >= 2 data dates");
  const double frac = cfg.get_double("split.train_fraction");
  if (!(frac > 0.0 && frac < 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "split.train_fraction must be in (0,1)");
  }
  const std::size_t n_train =
      static_cast<std::size_t>(std::floor(frac * static_cast<double>(dates.size())));
  if (n_train == 0 || n_train >= dates.size()) {
    throw Error(ErrorKind::TooFewDates, "split leaves an empty side");
  }
  return {{dates.front(), dates[n_train - 1]}, {dates[n_train], dates.back()}};
}

Dataset filter_range(const Dataset& instances, DateRange range) {
  Dataset out;
  for (const auto& inst : instances) {
    if (inst.window.as_of_date >= range.begin && inst.window.as_of_date <= range.end) {
      out.push_back(inst);
    }
  }
  return out;
}

/// Daily open-to-close returns of every instrument inside the range.
std::vector<double> range_returns(const PreparedData& data, DateRange range) {
  std::vector<double> returns;
  for (const auto& [id, s] : data.bars15) {
    for (const auto& [d, day] : group_by_day(s)) {
      if (d >= range.begin && d <= range.end) returns.push_back(daily_return(day));
    }
  }
  return returns;
}

LabelScheme load_scheme(const RunConfig& cfg) {
  const auto path = cfg.path("paths.labels");
  require_file(path, "label scheme");
  return read_scheme(path);
}

models::TrainConfig train_config(const RunConfig& cfg, std::uint64_t model_index) {
  models::TrainConfig tc;
  tc.batch_size = cfg.get_int("train.batch_size");
  tc.epochs = cfg.get_int("train.epochs");
  tc.learning_rate = cfg.get_double("train.learning_rate");
  tc.optimizer = nn::optimizer_from_string(cfg.get("train.optimizer"));
  tc.early_stop_epoch = cfg.get_int("train.checkpoint_epoch");
  tc.l2_lambda = cfg.get_double("train.l2_lambda");
  tc.seed = rng::derive(cfg.seed(), "model", model_index);
  return tc;
}

models::LstmClassifierConfig lstm_config(const RunConfig& cfg, WindowKind kind) {
  models::LstmClassifierConfig mc;
  mc.window_kind = kind;
  mc.hidden_size = static_cast<std::size_t>(cfg.get_int("model.hidden_size"));
  mc.keep_probability = cfg.get_double("model.keep_prob");
  return mc;
}

models::CnnClassifierConfig cnn_config(const RunConfig& cfg) {
  models::CnnClassifierConfig mc;
  mc.window_kind = window_kind_from_string(cfg.get("model.cnn_window"));
  mc.num_kernels = static_cast<std::size_t>(cfg.get_int("model.kernels"));
  mc.dense_sizes.clear();
  std::string sizes = cfg.get("model.dense_sizes");
  std::size_t start = 0;
  while (start <= sizes.size()) {
    const auto comma = sizes.find(',', start);
    const std::string tok =
        comma == std::string::npos ? sizes.substr(start) : sizes.substr(start, comma - start);
    if (tok.empty()) throw Error(ErrorKind::InvalidConfig, "model.dense_sizes: empty entry");
    mc.dense_sizes.push_back(std::stoul(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  mc.spatial_dropout_columns = cfg.get_int("model.spatial_dropout");
  mc.dense_keep = cfg.get_double("model.keep_prob");
  return mc;
}

struct StrategyModel {
  std::string id;  // "S", "L", "CNN"
  std::unique_ptr<models::Classifier> model;
};

std::vector<StrategyModel> build_strategy(const RunConfig& cfg) {
  const std::string strategy = cfg.get("model.strategy");
  std::vector<StrategyModel> out;
  if (strategy == "lstm") {
    rng::Rng init_s(rng::derive(train_config(cfg, 0).seed, "init"));
    rng::Rng init_l(rng::derive(train_config(cfg, 1).seed, "init"));
    out.push_back({"S", models::build_classifier(lstm_config(cfg, WindowKind::S), init_s)});
    out.push_back({"L", models::build_classifier(lstm_config(cfg, WindowKind::L), init_l)});
  } else if (strategy == "cnn") {
    rng::Rng init(rng::derive(train_config(cfg, 2).seed, "init"));
    out.push_back({"CNN", models::build_classifier(cnn_config(cfg), init)});
  } else {
    throw Error(ErrorKind::InvalidConfig, "model.strategy must be lstm or cnn");
  }
  return out;
}

std::filesystem::path checkpoint_path(const RunConfig& cfg, const std::string& model_id) {
  return cfg.out_dir() / ("model_" + model_id + ".ckpt");
}

std::string summary_line(const char* what, const std::string& detail) {
  return std::string(what) + ": " + detail;
}

}  // namespace

std::string cmd_synth(const RunConfig& cfg) {
  synthgen::SynthConfig sc;
  sc.seed = rng::derive(cfg.seed(), "data");
  sc.n_instruments = cfg.get_int("synth.instruments");
  sc.n_days = cfg.get_int("synth.days");
  sc.signal_strength = cfg.get_double("synth.signal");
  sc.base_volatility = cfg.get_double("synth.volatility");
  sc.price_scale = cfg.get_double("synth.price_scale");
  const auto start = cfg.get_date("synth.start_date");
  if (!start) throw Error(ErrorKind::InvalidConfig, "synth.start_date must be set");
  sc.start_date = *start;

  const synthgen::SynthOutput out = synthgen::generate(sc);

  const auto bars_path = cfg.path("paths.bars");
  ensure_parent(bars_path);
  write_bars(out.bars, bars_path);
  synthgen::write_truth(out.truth, cfg.path("paths.truth"));
  std::vector<std::string> ids;
  for (const auto& [id, s] : out.bars) ids.push_back(id);
  const auto universe_path = cfg.path("paths.universe");
  ensure_parent(universe_path);
  Universe::from_ids(ids).write(universe_path);

  return summary_line("synth", std::to_string(sc.n_instruments) + " instruments x " +
                                   std::to_string(sc.n_days) + " days -> " + bars_path.string());
}

std::string cmd_validate(const RunConfig& cfg, const std::string& path_override) {
  const std::filesystem::path path =
      path_override.empty() ? cfg.path("paths.bars") : std::filesystem::path(path_override);
  require_file(path, "bar data");
  const LoadResult result = scan_bars(path, Frequency::Min15);
  if (!result.issues.empty()) {
    std::string detail;
    for (const auto& issue : result.issues) {
      detail += "\nrow " + std::to_string(issue.row) + ": " + to_string(issue.kind) + ": " +
                issue.message;
    }
    const auto& first = result.issues.front();
    throw Error(first.kind, first.row,
                std::to_string(result.issues.size()) + " rejected row(s)" + detail);
  }
  return summary_line("validate", std::to_string(result.rows_seen) + " rows, " +
                                      std::to_string(result.series.size()) +
                                      " instruments, 0 rejects");
}

std::string cmd_calibrate(const RunConfig& cfg) {
  PreparedData data = prepare_data(cfg, false);
  const auto [train_range, test_range] = split_ranges(cfg, data);
  std::vector<double> returns = range_returns(data, train_range);
  const LabelScheme scheme = calibrate_labels(
      std::move(returns),
      "train:" + train_range.begin.iso() + ".." + train_range.end.iso());
  const auto labels_path = cfg.path("paths.labels");
  ensure_parent(labels_path);
  write_scheme(scheme, labels_path);
  char buf[160];
  std::snprintf(buf, sizeof buf, "q1=%.6g q2=%.6g q3=%.6g -> %s", scheme.q1, scheme.q2,
                scheme.q3, labels_path.string().c_str());
  return summary_line("calibrate", buf);
}

namespace {

struct InstanceSets {
  Dataset train, test;
};

InstanceSets build_sets(const PreparedData& data, WindowKind kind, const LabelScheme& scheme,
                        DateRange train_range, DateRange test_range) {
  const auto& bars = kind == WindowKind::L ? data.bars120 : data.bars15;
  const Dataset all = build_windows(bars, kind, data.cal, scheme);
  InstanceSets sets;
  sets.train = filter_range(all, train_range);
  sets.test = filter_range(all, test_range);
  if (sets.train.empty() || sets.test.empty()) {
    throw Error(ErrorKind::EmptyDataset,
                std::string("window kind ") + to_string(kind) + " yields an empty split");
  }
  return sets;
}

}  // namespace

std::string cmd_train(const RunConfig& cfg) {
  const std::string strategy = cfg.get("model.strategy");
  PreparedData data = prepare_data(cfg, strategy == "lstm");
  const LabelScheme scheme = load_scheme(cfg);
  const auto [train_range, test_range] = split_ranges(cfg, data);

  auto strategy_models = build_strategy(cfg);
  std::string summary = "train:";
  for (std::size_t i = 0; i < strategy_models.size(); ++i) {
    auto& sm = strategy_models[i];
    const models::TrainConfig tc = train_config(cfg, sm.id == "S" ? 0 : sm.id == "L" ? 1 : 2);
    const InstanceSets sets =
        build_sets(data, sm.model->window_kind(), scheme, train_range, test_range);
    const models::TrainedModel trained =
        models::train(*sm.model, sets.train, sets.test, tc, scheme);

    const auto ckpt_path = checkpoint_path(cfg, sm.id);
    ensure_parent(ckpt_path);
    nn::save_checkpoint(trained.checkpoint, ckpt_path);
    write_text(cfg.out_dir() / ("train_log_" + sm.id + ".csv"),
               models::training_log_csv(trained.log));

    // confusion of the checkpointed model on the test set
    auto eval_model = models::classifier_from_descriptor(trained.descriptor);
    models::load_parameters(*eval_model, trained.checkpoint);
    const models::Evaluation eval = models::evaluate(*eval_model, sets.test);
    write_text(cfg.out_dir() / ("confusion_" + sm.id + ".csv"),
               models::confusion_csv(eval.confusion));

    char buf[120];
    std::snprintf(buf, sizeof buf, " %s test_acc@%d=%.4f", sm.id.c_str(), tc.early_stop_epoch,
                  eval.accuracy);
    summary += buf;
  }
  return summary;
}

std::string cmd_ablate(const RunConfig& cfg, const std::string& suite) {
  PreparedData data = prepare_data(cfg, false);
  const LabelScheme scheme = load_scheme(cfg);
  const auto [train_range, test_range] = split_ranges(cfg, data);
  const models::TrainConfig base_tc = train_config(cfg, 3);

  auto lstm_variant = [&](const std::string& name, double keep, nn::OptimizerKind opt,
                          double lambda) {
    models::AblationVariant v;
    v.name = name;
    v.train_cfg = base_tc;
    v.train_cfg.optimizer = opt;
    v.train_cfg.l2_lambda = lambda;
    models::LstmClassifierConfig mc = lstm_config(cfg, WindowKind::S);
    mc.keep_probability = keep;
    v.build = [mc](rng::Rng& init) { return models::build_classifier(mc, init); };
    return v;
  };
  auto cnn_variant = [&](const std::string& name, auto mutate) {
    models::AblationVariant v;
    v.name = name;
    v.train_cfg = base_tc;
    models::CnnClassifierConfig mc = cnn_config(cfg);
    mutate(mc);
    v.build = [mc](rng::Rng& init) { return models::build_classifier(mc, init); };
    return v;
  };

  std::vector<models::AblationVariant> variants;
  WindowKind kind = WindowKind::S;
  const double keep = cfg.get_double("model.keep_prob");
  if (suite == "optimizers") {
    variants.push_back(lstm_variant("adam", keep, nn::OptimizerKind::Adam, 0));
    variants.push_back(lstm_variant("rmsprop", keep, nn::OptimizerKind::RmsProp, 0));
    variants.push_back(lstm_variant("adadelta", keep, nn::OptimizerKind::Adadelta, 0));
  } else if (suite == "regularization") {
    variants.push_back(lstm_variant("dropout_keep0.8", 0.8, nn::OptimizerKind::Adam, 0));
    variants.push_back(lstm_variant("l2_1e-4", 1.0, nn::OptimizerKind::Adam, 1e-4));
    variants.push_back(lstm_variant("l2_1e-3", 1.0, nn::OptimizerKind::Adam, 1e-3));
    variants.push_back(lstm_variant("l2_1e-2", 1.0, nn::OptimizerKind::Adam, 1e-2));
  } else if (suite == "keep_prob") {
    variants.push_back(lstm_variant("keep0.7", 0.7, nn::OptimizerKind::Adam, 0));
    variants.push_back(lstm_variant("keep0.8", 0.8, nn::OptimizerKind::Adam, 0));
    variants.push_back(lstm_variant("keep0.9", 0.9, nn::OptimizerKind::Adam, 0));
  } else if (suite == "cnn_framework") {
    kind = window_kind_from_string(cfg.get("model.cnn_window"));
    variants.push_back(cnn_variant("final", [](auto&) {}));
    variants.push_back(cnn_variant("pool_max", [](auto& mc) { mc.pooling = models::Pooling::Max; }));
    variants.push_back(cnn_variant("pool_avg", [](auto& mc) { mc.pooling = models::Pooling::Avg; }));
    variants.push_back(cnn_variant("second_conv", [](auto& mc) { mc.second_conv = true; }));
    variants.push_back(cnn_variant("dense_1", [](auto& mc) { mc.dense_sizes = {250}; }));
    variants.push_back(cnn_variant("dense_3", [](auto& mc) { mc.dense_sizes = {250, 100, 100}; }));
  } else if (suite == "dnn_vs_cnn") {
    kind = window_kind_from_string(cfg.get("model.cnn_window"));
    variants.push_back(cnn_variant("cnn", [](auto&) {}));
    variants.push_back(cnn_variant("dnn", [](auto& mc) { mc.conv_enabled = false; }));
  } else if (suite == "window_span") {
    // two datasets by design: one-day vs five-day input spans
    const InstanceSets sets5 =
        build_sets(data, WindowKind::Cnn5d, scheme, train_range, test_range);
    const InstanceSets sets1 = build_sets(data, WindowKind::S, scheme, train_range, test_range);
    std::vector<models::AblationVariant> v5, v1;
    v5.push_back(cnn_variant("five_day", [](auto& mc) { mc.window_kind = WindowKind::Cnn5d; }));
    v1.push_back(cnn_variant("one_day", [](auto& mc) { mc.window_kind = WindowKind::S; }));
    auto rows = models::run_ablation_suite(v5, sets5.train, sets5.test, scheme);
    auto rows1 = models::run_ablation_suite(v1, sets1.train, sets1.test, scheme);
    rows.insert(rows.end(), rows1.begin(), rows1.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.test_accuracy > b.test_accuracy;
    });
    const auto out_path = cfg.out_dir() / ("ablation_" + suite + ".csv");
    write_text(out_path, models::ablation_csv(rows));
    return summary_line("ablate", suite + " -> " + out_path.string());
  } else {
    throw Error(ErrorKind::UnknownSuite,
                suite + " (expected optimizers|regularization|keep_prob|cnn_framework|"
                        "dnn_vs_cnn|window_span)");
  }

  const InstanceSets sets = build_sets(data, kind, scheme, train_range, test_range);
  const auto rows = models::run_ablation_suite(variants, sets.train, sets.test, scheme);
  const auto out_path = cfg.out_dir() / ("ablation_" + suite + ".csv");
  write_text(out_path, models::ablation_csv(rows));
  return summary_line("ablate", suite + " -> " + out_path.string());
}

namespace {

struct LoadedModel {
  std::string id;
  std::unique_ptr<models::Classifier> model;
};

std::vector<LoadedModel> load_strategy_checkpoints(const RunConfig& cfg) {
  const std::string strategy = cfg.get("model.strategy");
  std::vector<std::string> ids;
  if (strategy == "lstm") ids = {"S", "L"};
  else if (strategy == "cnn") ids = {"CNN"};
  else throw Error(ErrorKind::InvalidConfig, "model.strategy must be lstm or cnn");

  std::vector<LoadedModel> out;
  for (const auto& id : ids) {
    const auto path = checkpoint_path(cfg, id);
    require_file(path, "checkpoint " + id);
    const nn::Checkpoint ckpt = nn::load_checkpoint(path);
    auto model = models::classifier_from_descriptor(ckpt.arch);
    models::load_parameters(*model, ckpt);
    out.push_back({id, std::move(model)});
  }
  return out;
}

/// Scores every instrument-day in the range with the strategy's models.
backtest::ScoreStream score_range(const RunConfig& cfg, const PreparedData& data,
                                  const LabelScheme& scheme, DateRange range,
                                  std::vector<LoadedModel>& loaded) {
  // windows per model kind, keyed by (date, instrument)
  struct Key {
    Date date;
    std::string id;
    bool operator<(const Key& o) const {
      return std::pair(date, id) < std::pair(o.date, o.id);
    }
  };
  std::vector<std::map<Key, const LabeledInstance*>> per_model_windows;
  std::vector<Dataset> per_model_instances;
  per_model_instances.reserve(loaded.size());
  for (auto& lm : loaded) {
    const auto& bars = lm.model->window_kind() == WindowKind::L ? data.bars120 : data.bars15;
    per_model_instances.push_back(build_windows(bars, lm.model->window_kind(), data.cal, scheme));
  }
  per_model_windows.resize(loaded.size());
  for (std::size_t m = 0; m < loaded.size(); ++m) {
    for (const auto& inst : per_model_instances[m]) {
      if (inst.window.as_of_date < range.begin || inst.window.as_of_date > range.end) continue;
      per_model_windows[m][{inst.window.as_of_date, inst.window.instrument_id}] = &inst;
    }
  }

  backtest::ScoreStream stream;
  // instruments scorable on a date need a window for every model
  for (const auto& [key, inst0] : per_model_windows[0]) {
    std::vector<const LabeledInstance*> windows{inst0};
    bool complete = true;
    for (std::size_t m = 1; m < loaded.size(); ++m) {
      const auto it = per_model_windows[m].find(key);
      if (it == per_model_windows[m].end()) {
        complete = false;
        break;
      }
      windows.push_back(it->second);
    }
    if (!complete) continue;

    std::vector<scoring::ClassProbabilities> probs;
    for (std::size_t m = 0; m < loaded.size(); ++m) {
      const nn::Tensor p =
          models::predict_probs(*loaded[m].model, {&windows[m]->window.matrix});
      scoring::ClassProbabilities cp;
      cp.instrument_id = key.id;
      cp.as_of_date = key.date;
      cp.model_id = loaded[m].id;
      for (int k = 0; k < kNumClasses; ++k) cp.p[static_cast<std::size_t>(k)] = p.at(0, k);
      probs.push_back(std::move(cp));
    }
    stream[key.date].push_back(scoring::expected_return(probs, scheme));
  }
  return stream;
}

DateRange backtest_range(const RunConfig& cfg, const PreparedData& data) {
  const auto bb = cfg.get_date("backtest.begin");
  const auto be = cfg.get_date("backtest.end");
  if (bb && be) return {*bb, *be};
  if (bb || be) throw Error(ErrorKind::InvalidConfig, "set both backtest dates or neither");
  return split_ranges(cfg, data).second;  // default: the held-out test range
}

}  // namespace

std::string cmd_score(const RunConfig& cfg) {
  PreparedData data = prepare_data(cfg, cfg.get("model.strategy") == "lstm");
  const LabelScheme scheme = load_scheme(cfg);
  auto loaded = load_strategy_checkpoints(cfg);
  const DateRange range = backtest_range(cfg, data);
  const backtest::ScoreStream stream = score_range(cfg, data, scheme, range, loaded);

  std::vector<scoring::ExpectedReturnScore> all;
  for (const auto& [date, scores] : stream) {
    auto ranked = scoring::rank_candidates(scores);
    all.insert(all.end(), ranked.begin(), ranked.end());
  }
  const auto path = cfg.out_dir() / "scores.csv";
  write_text(path, scoring::scores_csv(all));
  return summary_line("score", std::to_string(all.size()) + " scores -> " + path.string());
}

std::string cmd_backtest(const RunConfig& cfg) {
  PreparedData data = prepare_data(cfg, cfg.get("model.strategy") == "lstm");
  const LabelScheme scheme = load_scheme(cfg);
  auto loaded = load_strategy_checkpoints(cfg);
  const DateRange range = backtest_range(cfg, data);
  const backtest::ScoreStream stream = score_range(cfg, data, scheme, range, loaded);

  backtest::SelectionRule rule;
  rule.max_positions = cfg.get_int("backtest.max_positions");
  rule.min_expected = cfg.get_double("backtest.min_expected_return");
  backtest::FeeSchedule fees;
  fees.per_side = cfg.get_double("backtest.fee_per_side");

  const backtest::BacktestReport report =
      backtest::run_backtest(stream, data.bars15, rule, fees, range.begin, range.end);

  // also write the per-date ranked scores the rule consumed
  std::vector<scoring::ExpectedReturnScore> all;
  for (const auto& [date, scores] : stream) {
    auto ranked = scoring::rank_candidates(scores);
    all.insert(all.end(), ranked.begin(), ranked.end());
  }
  write_text(cfg.out_dir() / "scores.csv", scoring::scores_csv(all));

  write_text(cfg.out_dir() / "metrics.csv",
             backtest::metrics_csv(report.metrics, range.begin, range.end));
  write_text(cfg.out_dir() / "equity.csv", backtest::equity_csv(report));
  write_text(cfg.out_dir() / "trades.csv", backtest::trades_csv(report.trades));
  svg::write_line_chart(cfg.out_dir() / "equity.svg", "strategy vs baseline", report.dates,
                        {{"with fee", "#d62728", report.equity_with_fee},
                         {"fee free", "#1f77b4", report.equity_fee_free},
                         {"baseline", "#7f7f7f", report.baseline}});

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%d transactions, net %.4f (simple) %.4f (compounded), mdd %.4f",
                report.metrics.transaction_count, report.metrics.net_profit_rate,
                report.metrics.net_profit_compound, report.metrics.max_drawdown);
  return summary_line("backtest", buf);
}

std::string cmd_pipeline(const RunConfig& cfg) {
  std::string summary = cmd_synth(cfg);
  summary += '\n' + cmd_calibrate(cfg);
  summary += '\n' + cmd_train(cfg);
  summary += '\n' + cmd_backtest(cfg);
  return summary;
}

}  // namespace stocksel::pipeline
