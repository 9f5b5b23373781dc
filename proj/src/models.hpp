#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "checkpoint.hpp"
#include "featurize.hpp"
#include "layers.hpp"
#include "optim.hpp"
#include "tape.hpp"

namespace stocksel::models {

/// LSTM -> dropout -> dense -> softmax.
struct LstmClassifierConfig {
  WindowKind window_kind = WindowKind::S;  // S or L
  std::size_t hidden_size = 64;
  double keep_probability = 0.8;
};

enum class Pooling { None, Max, Avg };

/// conv 1x11 (ReLU) -> flatten -> dense stack (ReLU) -> dense 4 -> softmax,
/// with spatial dropout on the input matrix during training. The ablation
/// flags default to the final framework: no pooling, no second conv, two
/// dense layers, conv enabled.
struct CnnClassifierConfig {
  WindowKind window_kind = WindowKind::Cnn5d;  // Cnn5d or S (time-span ablation)
  std::size_t num_kernels = 40;
  std::vector<std::size_t> dense_sizes = {250, 100};
  int spatial_dropout_columns = 3;
  double dense_keep = 0.8;
  Pooling pooling = Pooling::None;
  bool second_conv = false;
  bool conv_enabled = true;
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual const std::string& descriptor() const = 0;
  virtual WindowKind window_kind() const = 0;
  virtual std::pair<std::size_t, std::size_t> input_shape() const = 0;  // steps, features
  virtual std::vector<nn::Parameter*> parameters() = 0;
  /// Builds the batch forward graph and returns the probabilities node
  /// (B x 4). dropout_rng is only consumed when training.
  virtual nn::Tape::NodeId forward(nn::Tape& tape,
                                   const std::vector<const nn::Tensor*>& windows, bool training,
                                   rng::Rng* dropout_rng) = 0;
};

std::unique_ptr<Classifier> build_classifier(const LstmClassifierConfig& config, rng::Rng& init);
std::unique_ptr<Classifier> build_classifier(const CnnClassifierConfig& config, rng::Rng& init);
/// Rebuilds the architecture named by a checkpoint descriptor with
/// zero-initialized parameters (load_parameters fills them).
std::unique_ptr<Classifier> classifier_from_descriptor(const std::string& descriptor);

std::size_t parameter_count(Classifier& model);
void load_parameters(Classifier& model, const nn::Checkpoint& ckpt);
nn::Checkpoint snapshot_parameters(Classifier& model, std::uint64_t seed);

/// Inference probabilities, dropout inactive.
nn::Tensor predict_probs(Classifier& model, const std::vector<const nn::Tensor*>& windows);

struct TrainConfig {
  int batch_size = 30;
  int epochs = 50;
  double learning_rate = 0.001;
  nn::OptimizerKind optimizer = nn::OptimizerKind::Adam;
  int early_stop_epoch = 20;  // fixed-epoch checkpoint selection
  double l2_lambda = 0.0;
  std::uint64_t seed = 42;
};

struct EpochMetrics {
  int epoch = 0;
  double train_accuracy = 0;
  double test_accuracy = 0;
  double train_loss = 0;
};

struct TrainedModel {
  std::string descriptor;
  nn::Checkpoint checkpoint;  // parameters at early_stop_epoch
  LabelScheme scheme;
  std::vector<EpochMetrics> log;
};

/// Mini-batch gradient descent with seeded per-epoch shuffling. The
/// returned checkpoint is the one at early_stop_epoch, not the last epoch;
/// the model itself is left at the final epoch.
TrainedModel train(Classifier& model, const Dataset& train_set, const Dataset& test_set,
                   const TrainConfig& cfg, const LabelScheme& scheme);

struct Evaluation {
  double accuracy = 0;
  nn::Tensor confusion;  // 4x4 counts, rows true class, cols predicted
};

Evaluation evaluate(Classifier& model, const Dataset& dataset);

enum class Axis { Row, Column };

/// Normalizes the chosen axis to sum 1 per line; all-zero lines stay zero.
nn::Tensor normalize_confusion(const nn::Tensor& counts, Axis axis);

struct AblationVariant {
  std::string name;
  std::function<std::unique_ptr<Classifier>(rng::Rng&)> build;
  TrainConfig train_cfg;
};

struct AblationRow {
  std::string name;
  std::uint64_t seed = 0;
  std::uint64_t dataset_hash = 0;
  int checkpoint_epoch = 0;
  double test_accuracy = 0;
  double train_accuracy = 0;
  double train_loss = 0;
};

/// Trains every variant on the identical split and emits rows ranked by
/// test accuracy at the checkpoint epoch.
std::vector<AblationRow> run_ablation_suite(const std::vector<AblationVariant>& variants,
                                            const Dataset& train_set, const Dataset& test_set,
                                            const LabelScheme& scheme);

std::uint64_t dataset_hash(const Dataset& dataset);

std::string training_log_csv(const std::vector<EpochMetrics>& log);
std::string confusion_csv(const nn::Tensor& matrix);
std::string ablation_csv(const std::vector<AblationRow>& rows);

}  // namespace stocksel::models
