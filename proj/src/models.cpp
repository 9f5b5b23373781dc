#include "models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>

namespace stocksel::models {

using nn::Tape;
using nn::Tensor;

namespace {

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string format_f6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

const char* to_string(Pooling p) {
  switch (p) {
    case Pooling::None: return "none";
    case Pooling::Max: return "max";
    case Pooling::Avg: return "avg";
  }
  return "?";
}

Pooling pooling_from_string(const std::string& s) {
  if (s == "none") return Pooling::None;
  if (s == "max") return Pooling::Max;
  if (s == "avg") return Pooling::Avg;
  throw Error(ErrorKind::InvalidConfig, "unknown pooling " + s);
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

class LstmClassifier final : public Classifier {
 public:
  LstmClassifier(const LstmClassifierConfig& config, rng::Rng& init) : config_(config) {
    if (config.window_kind == WindowKind::Cnn5d)
      throw Error(ErrorKind::InvalidConfig, "lstm window kind must be S or L");
    if (config.hidden_size < 1) throw Error(ErrorKind::InvalidConfig, "hidden_size must be >= 1");
    if (!(config.keep_probability > 0.0 && config.keep_probability <= 1.0))
      throw Error(ErrorKind::InvalidConfig, "keep_probability out of (0,1]");
    cell_ = nn::LstmCellParams(kFeatureCount, config.hidden_size, init, "lstm");
    head_ = nn::DenseParams(config.hidden_size, kNumClasses, init, "head");
    descriptor_ = std::string("lstm kind=") + stocksel::to_string(config.window_kind) +
                  " hidden=" + std::to_string(config.hidden_size) +
                  " keep=" + format_g(config.keep_probability);
  }

  const std::string& descriptor() const override { return descriptor_; }
  WindowKind window_kind() const override { return config_.window_kind; }

  std::pair<std::size_t, std::size_t> input_shape() const override {
    return {static_cast<std::size_t>(window_steps(config_.window_kind)),
            static_cast<std::size_t>(kFeatureCount)};
  }

  std::vector<nn::Parameter*> parameters() override {
    auto params = cell_.parameters();
    for (auto* p : head_.parameters()) params.push_back(p);
    return params;
  }

  Tape::NodeId forward(Tape& tape, const std::vector<const Tensor*>& windows, bool training,
                       rng::Rng* dropout_rng) override {
    const auto [steps, features] = input_shape();
    const std::size_t batch = windows.size();
    if (batch == 0) throw Error(ErrorKind::EmptyDataset, "forward on empty batch");
    std::vector<Tape::NodeId> step_inputs;
    step_inputs.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      Tensor xt(batch, features);
      for (std::size_t b = 0; b < batch; ++b) {
        nn::check_shape(windows[b]->rows() == steps && windows[b]->cols() == features,
                        "lstm window shape");
        for (std::size_t j = 0; j < features; ++j) xt.at(b, j) = windows[b]->at(t, j);
      }
      step_inputs.push_back(tape.input(std::move(xt)));
    }
    Tape::NodeId h = nn::lstm_layer(tape, step_inputs, cell_);
    if (training && config_.keep_probability < 1.0) {
      h = tape.dropout_elementwise(h, config_.keep_probability, *dropout_rng);
    }
    const Tape::NodeId scores = nn::dense(tape, h, head_);
    return tape.softmax_rows(scores);
  }

 private:
  LstmClassifierConfig config_;
  nn::LstmCellParams cell_;
  nn::DenseParams head_;
  std::string descriptor_;
};

class CnnClassifier final : public Classifier {
 public:
  CnnClassifier(const CnnClassifierConfig& config, rng::Rng& init) : config_(config) {
    if (config.window_kind == WindowKind::L)
      throw Error(ErrorKind::InvalidConfig, "cnn window kind must be CNN5D or S");
    if (config.dense_sizes.empty())
      throw Error(ErrorKind::InvalidConfig, "cnn needs at least one dense layer");
    for (std::size_t s : config.dense_sizes) {
      if (s == 0) throw Error(ErrorKind::InvalidConfig, "dense sizes must be positive");
    }
    if (!(config.dense_keep > 0.0 && config.dense_keep <= 1.0))
      throw Error(ErrorKind::InvalidConfig, "dense_keep out of (0,1]");
    if (config.spatial_dropout_columns < 0 || config.spatial_dropout_columns >= kFeatureCount)
      throw Error(ErrorKind::InvalidConfig, "spatial_dropout_columns out of [0, 11)");
    if (!config.conv_enabled && (config.second_conv || config.pooling != Pooling::None))
      throw Error(ErrorKind::InvalidConfig, "dnn ablation cannot pool or re-convolve");

    const std::size_t steps = static_cast<std::size_t>(window_steps(config.window_kind));
    std::size_t rows_per = steps;
    std::size_t channels = kFeatureCount;
    if (config.conv_enabled) {
      if (config.num_kernels < 1) throw Error(ErrorKind::InvalidConfig, "need >= 1 kernel");
      conv_ = nn::Conv1xFParams(config.num_kernels, kFeatureCount, init, "conv");
      channels = config.num_kernels;
      if (config.second_conv) {
        conv2_w_ = nn::Parameter("conv2.w",
                                 nn::uniform_fanin(channels, channels * 3, channels * 3, init));
        conv2_b_ = nn::Parameter("conv2.b", Tensor(1, channels));
        rows_per -= 2;
      }
      if (config.pooling != Pooling::None) {
        if (rows_per % 2 != 0)
          throw Error(ErrorKind::InvalidConfig, "pooling needs an even number of time rows");
        rows_per /= 2;
      }
    }
    flat_dim_ = rows_per * channels;
    rows_after_conv2_ = rows_per;

    std::size_t in_dim = flat_dim_;
    for (std::size_t i = 0; i < config.dense_sizes.size(); ++i) {
      dense_.emplace_back(in_dim, config.dense_sizes[i], init,
                          "dense" + std::to_string(i + 1));
      in_dim = config.dense_sizes[i];
    }
    head_ = nn::DenseParams(in_dim, kNumClasses, init, "head");

    std::string dense_list;
    for (std::size_t i = 0; i < config.dense_sizes.size(); ++i) {
      if (i) dense_list += ',';
      dense_list += std::to_string(config.dense_sizes[i]);
    }
    descriptor_ = std::string("cnn kind=") + stocksel::to_string(config.window_kind) +
                  " kernels=" + std::to_string(config.num_kernels) + " dense=" + dense_list +
                  " spatial=" + std::to_string(config.spatial_dropout_columns) +
                  " keep=" + format_g(config.dense_keep) +
                  " pooling=" + to_string(config.pooling) +
                  " second=" + (config.second_conv ? "1" : "0") +
                  " conv=" + (config.conv_enabled ? "1" : "0");
  }

  const std::string& descriptor() const override { return descriptor_; }
  WindowKind window_kind() const override { return config_.window_kind; }

  std::pair<std::size_t, std::size_t> input_shape() const override {
    return {static_cast<std::size_t>(window_steps(config_.window_kind)),
            static_cast<std::size_t>(kFeatureCount)};
  }

  std::vector<nn::Parameter*> parameters() override {
    std::vector<nn::Parameter*> params;
    if (config_.conv_enabled) {
      for (auto* p : conv_.parameters()) params.push_back(p);
      if (config_.second_conv) {
        params.push_back(&conv2_w_);
        params.push_back(&conv2_b_);
      }
    }
    for (auto& d : dense_) {
      params.push_back(&d.w);
      params.push_back(&d.b);
    }
    for (auto* p : head_.parameters()) params.push_back(p);
    return params;
  }

  Tape::NodeId forward(Tape& tape, const std::vector<const Tensor*>& windows, bool training,
                       rng::Rng* dropout_rng) override {
    const auto [steps, features] = input_shape();
    const std::size_t batch = windows.size();
    if (batch == 0) throw Error(ErrorKind::EmptyDataset, "forward on empty batch");
    Tensor stacked(batch * steps, features);
    for (std::size_t b = 0; b < batch; ++b) {
      nn::check_shape(windows[b]->rows() == steps && windows[b]->cols() == features,
                      "cnn window shape");
      std::memcpy(stacked.data() + b * steps * features, windows[b]->data(),
                  steps * features * sizeof(double));
    }
    Tape::NodeId x = tape.input(std::move(stacked));
    if (training && config_.spatial_dropout_columns > 0) {
      // one column choice per batch, the SpatialDropout convention
      x = tape.dropout_columns(x, config_.spatial_dropout_columns, *dropout_rng);
    }
    std::size_t rows_per = steps;
    if (config_.conv_enabled) {
      x = nn::conv_1xf(tape, x, conv_);
      if (config_.second_conv) {
        x = tape.conv_rows3(x, tape.param(conv2_w_), tape.param(conv2_b_), rows_per);
        rows_per -= 2;
      }
      if (config_.pooling != Pooling::None) {
        x = tape.pool_rows_pairwise(x, config_.pooling == Pooling::Max, rows_per);
        rows_per /= 2;
      }
    }
    x = tape.reshape(x, batch, flat_dim_);
    for (auto& d : dense_) {
      x = tape.relu(nn::dense(tape, x, d));
      if (training && config_.dense_keep < 1.0) {
        x = tape.dropout_elementwise(x, config_.dense_keep, *dropout_rng);
      }
    }
    const Tape::NodeId scores = nn::dense(tape, x, head_);
    return tape.softmax_rows(scores);
  }

 private:
  CnnClassifierConfig config_;
  nn::Conv1xFParams conv_;
  nn::Parameter conv2_w_, conv2_b_;
  std::vector<nn::DenseParams> dense_;
  nn::DenseParams head_;
  std::size_t flat_dim_ = 0;
  std::size_t rows_after_conv2_ = 0;
  std::string descriptor_;
};

}  // namespace

std::unique_ptr<Classifier> build_classifier(const LstmClassifierConfig& config, rng::Rng& init) {
  return std::make_unique<LstmClassifier>(config, init);
}

std::unique_ptr<Classifier> build_classifier(const CnnClassifierConfig& config, rng::Rng& init) {
  return std::make_unique<CnnClassifier>(config, init);
}

std::unique_ptr<Classifier> classifier_from_descriptor(const std::string& descriptor) {
  rng::Rng zero_init(0);
  const auto kv = parse_kv(descriptor);
  if (descriptor.rfind("lstm ", 0) == 0) {
    LstmClassifierConfig config;
    config.window_kind = window_kind_from_string(kv.at("kind"));
    config.hidden_size = std::stoul(kv.at("hidden"));
    config.keep_probability = std::stod(kv.at("keep"));
    return build_classifier(config, zero_init);
  }
  if (descriptor.rfind("cnn ", 0) == 0) {
    CnnClassifierConfig config;
    config.window_kind = window_kind_from_string(kv.at("kind"));
    config.num_kernels = std::stoul(kv.at("kernels"));
    config.dense_sizes.clear();
    std::istringstream ds(kv.at("dense"));
    std::string tok;
    while (std::getline(ds, tok, ',')) config.dense_sizes.push_back(std::stoul(tok));
    config.spatial_dropout_columns = std::stoi(kv.at("spatial"));
    config.dense_keep = std::stod(kv.at("keep"));
    config.pooling = pooling_from_string(kv.at("pooling"));
    config.second_conv = kv.at("second") == "1";
    config.conv_enabled = kv.at("conv") == "1";
    return build_classifier(config, zero_init);
  }
  throw Error(ErrorKind::InvalidConfig, "unknown architecture descriptor: " + descriptor);
}

std::size_t parameter_count(Classifier& model) {
  std::size_t n = 0;
  for (const nn::Parameter* p : model.parameters()) n += p->value.size();
  return n;
}

void load_parameters(Classifier& model, const nn::Checkpoint& ckpt) {
  for (nn::Parameter* p : model.parameters()) {
    const Tensor* t = ckpt.find(p->name);
    if (!t) throw Error(ErrorKind::InvalidConfig, "checkpoint missing tensor " + p->name);
    nn::check_shape(t->same_shape(p->value), "checkpoint tensor shape");
    p->value = *t;
  }
}

nn::Checkpoint snapshot_parameters(Classifier& model, std::uint64_t seed) {
  nn::Checkpoint ckpt;
  ckpt.arch = model.descriptor();
  ckpt.seed = seed;
  for (const nn::Parameter* p : model.parameters()) {
    ckpt.tensors.emplace_back(p->name, p->value);
  }
  return ckpt;
}

nn::Tensor predict_probs(Classifier& model, const std::vector<const Tensor*>& windows) {
  Tape tape;
  const Tape::NodeId probs = model.forward(tape, windows, false, nullptr);
  return tape.value(probs);
}

namespace {

Tensor one_hot_labels(const Dataset& dataset, const std::vector<std::size_t>& indices) {
  Tensor y(indices.size(), kNumClasses);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    y.at(i, static_cast<std::size_t>(dataset[indices[i]].label)) = 1.0;
  }
  return y;
}

}  // namespace

TrainedModel train(Classifier& model, const Dataset& train_set, const Dataset& test_set,
                   const TrainConfig& cfg, const LabelScheme& scheme) {
  if (train_set.empty() || test_set.empty())
    throw Error(ErrorKind::EmptyDataset, "train and test sets must be non-empty");
  if (cfg.batch_size < 1) throw Error(ErrorKind::InvalidConfig, "batch_size must be >= 1");
  if (cfg.epochs < 1) throw Error(ErrorKind::InvalidConfig, "epochs must be >= 1");
  if (cfg.early_stop_epoch < 1 || cfg.early_stop_epoch > cfg.epochs)
    throw Error(ErrorKind::InvalidConfig, "early_stop_epoch must be in [1, epochs]");
  if (cfg.l2_lambda < 0) throw Error(ErrorKind::InvalidConfig, "l2_lambda must be >= 0");

  nn::OptimizerConfig opt_cfg;
  opt_cfg.kind = cfg.optimizer;
  opt_cfg.learning_rate = cfg.learning_rate;
  auto params = model.parameters();
  nn::Optimizer optimizer(opt_cfg, params);
  const double n_params = static_cast<double>(parameter_count(model));

  TrainedModel result;
  result.descriptor = model.descriptor();
  result.scheme = scheme;

  const std::size_t n = train_set.size();
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng::Rng shuffle_rng(rng::derive(cfg.seed, "shuffle", static_cast<std::uint64_t>(epoch)));
    rng::Rng dropout_rng(rng::derive(cfg.seed, "dropout", static_cast<std::uint64_t>(epoch)));
    const auto perm = shuffle_rng.permutation(n);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
      std::vector<std::size_t> indices(perm.begin() + start, perm.begin() + stop);
      std::vector<const Tensor*> windows(indices.size());
      for (std::size_t i = 0; i < indices.size(); ++i) {
        windows[i] = &train_set[indices[i]].window.matrix;
      }

      Tape tape;
      const Tape::NodeId probs = model.forward(tape, windows, true, &dropout_rng);
      Tape::NodeId loss = tape.cross_entropy(probs, one_hot_labels(train_set, indices));
      if (cfg.l2_lambda > 0.0) {
        Tape::NodeId sumsq = -1;
        for (const Tape::NodeId p : tape.param_nodes()) {
          const Tape::NodeId ss = tape.sum_squares(p);
          sumsq = sumsq < 0 ? ss : tape.add(sumsq, ss);
        }
        loss = tape.add(loss, tape.scale(sumsq, cfg.l2_lambda / (2.0 * n_params)));
      }

      const double batch_loss = tape.value(loss).at(0, 0);
      if (!std::isfinite(batch_loss))
        throw Error(ErrorKind::DivergedLoss, "non-finite loss at epoch " + std::to_string(epoch));
      loss_sum += batch_loss * static_cast<double>(indices.size());

      optimizer.zero_grad();
      tape.backward(loss);
      optimizer.step();
    }

    EpochMetrics metrics;
    metrics.epoch = epoch;
    metrics.train_loss = loss_sum / static_cast<double>(n);
    metrics.train_accuracy = evaluate(model, train_set).accuracy;
    metrics.test_accuracy = evaluate(model, test_set).accuracy;
    result.log.push_back(metrics);

    if (epoch == cfg.early_stop_epoch) {
      result.checkpoint = snapshot_parameters(model, cfg.seed);
    }
  }
  return result;
}

Evaluation evaluate(Classifier& model, const Dataset& dataset) {
  if (dataset.empty()) throw Error(ErrorKind::EmptyDataset, "evaluate on empty dataset");
  Evaluation eval;
  eval.confusion = Tensor(kNumClasses, kNumClasses);
  std::size_t correct = 0;
  constexpr std::size_t kEvalBatch = 256;
  for (std::size_t start = 0; start < dataset.size(); start += kEvalBatch) {
    const std::size_t stop = std::min(dataset.size(), start + kEvalBatch);
    std::vector<const Tensor*> windows;
    windows.reserve(stop - start);
    for (std::size_t i = start; i < stop; ++i) windows.push_back(&dataset[i].window.matrix);
    const Tensor probs = predict_probs(model, windows);
    for (std::size_t i = start; i < stop; ++i) {
      const std::size_t r = i - start;
      std::size_t best = 0;
      for (std::size_t c = 1; c < kNumClasses; ++c) {
        if (probs.at(r, c) > probs.at(r, best)) best = c;
      }
      const auto truth = static_cast<std::size_t>(dataset[i].label);
      eval.confusion.at(truth, best) += 1.0;
      if (best == truth) ++correct;
    }
  }
  eval.accuracy = static_cast<double>(correct) / static_cast<double>(dataset.size());
  return eval;
}

Tensor normalize_confusion(const Tensor& counts, Axis axis) {
  Tensor out = counts;
  if (axis == Axis::Row) {
    for (std::size_t r = 0; r < out.rows(); ++r) {
      double sum = 0;
      for (std::size_t c = 0; c < out.cols(); ++c) sum += out.at(r, c);
      if (sum == 0) continue;
      for (std::size_t c = 0; c < out.cols(); ++c) out.at(r, c) /= sum;
    }
  } else {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      double sum = 0;
      for (std::size_t r = 0; r < out.rows(); ++r) sum += out.at(r, c);
      if (sum == 0) continue;
      for (std::size_t r = 0; r < out.rows(); ++r) out.at(r, c) /= sum;
    }
  }
  return out;
}

std::uint64_t dataset_hash(const Dataset& dataset) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_bytes = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& inst : dataset) {
    mix_bytes(inst.window.instrument_id.data(), inst.window.instrument_id.size());
    mix_bytes(&inst.window.as_of_date.serial, sizeof inst.window.as_of_date.serial);
    mix_bytes(&inst.label, sizeof inst.label);
    mix_bytes(&inst.realized_return, sizeof inst.realized_return);
    mix_bytes(inst.window.matrix.data(), inst.window.matrix.size() * sizeof(double));
  }
  return h;
}

std::vector<AblationRow> run_ablation_suite(const std::vector<AblationVariant>& variants,
                                            const Dataset& train_set, const Dataset& test_set,
                                            const LabelScheme& scheme) {
  std::vector<AblationRow> rows;
  const std::uint64_t hash = dataset_hash(train_set);
  for (const auto& variant : variants) {
    rng::Rng init(rng::derive(variant.train_cfg.seed, "init"));
    auto model = variant.build(init);
    const TrainedModel trained = train(*model, train_set, test_set, variant.train_cfg, scheme);
    const EpochMetrics& at_ckpt =
        trained.log[static_cast<std::size_t>(variant.train_cfg.early_stop_epoch - 1)];
    AblationRow row;
    row.name = variant.name;
    row.seed = variant.train_cfg.seed;
    row.dataset_hash = hash;
    row.checkpoint_epoch = variant.train_cfg.early_stop_epoch;
    row.test_accuracy = at_ckpt.test_accuracy;
    row.train_accuracy = at_ckpt.train_accuracy;
    row.train_loss = at_ckpt.train_loss;
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const AblationRow& a, const AblationRow& b) {
    if (a.test_accuracy != b.test_accuracy) return a.test_accuracy > b.test_accuracy;
    return a.name < b.name;
  });
  return rows;
}

std::string training_log_csv(const std::vector<EpochMetrics>& log) {
  std::string out = "epoch,train_acc,test_acc,train_loss\n";
  for (const auto& m : log) {
    out += std::to_string(m.epoch);
    out += ',';
    out += format_f6(m.train_accuracy);
    out += ',';
    out += format_f6(m.test_accuracy);
    out += ',';
    out += format_f6(m.train_loss);
    out += '\n';
  }
  return out;
}

std::string confusion_csv(const nn::Tensor& matrix) {
  std::string out = "true\\pred";
  for (int c = 0; c < kNumClasses; ++c) {
    out += ',';
    out += kClassNames[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    out += kClassNames[r];
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      out += ',';
      out += format_f6(matrix.at(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out =
      "rank,variant,seed,dataset_hash,checkpoint_epoch,test_acc,train_acc,train_loss\n";
  char hash_buf[24];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                  static_cast<unsigned long long>(r.dataset_hash));
    out += std::to_string(i + 1);
    out += ',';
    out += r.name;
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += hash_buf;
    out += ',';
    out += std::to_string(r.checkpoint_epoch);
    out += ',';
    out += format_f6(r.test_accuracy);
    out += ',';
    out += format_f6(r.train_accuracy);
    out += ',';
    out += format_f6(r.train_loss);
    out += '\n';
  }
  return out;
}

}  // namespace stocksel::models
