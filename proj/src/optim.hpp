#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tensor.hpp"

namespace stocksel::nn {

enum class OptimizerKind { Adam, RmsProp, Adadelta };

const char* to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(const std::string& text);

/// Hyperparameters beyond the learning rate are the optimizers' canonical
/// published defaults.
struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 0.001;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double rms_rho = 0.9;
  double rms_eps = 1e-8;
  double ada_rho = 0.95;
  double ada_eps = 1e-6;
};

/// Owns the per-parameter moment buffers and applies one update rule.
/// The learning rate multiplies every rule, including Adadelta's
/// self-scaled step.
class Optimizer {
 public:
  Optimizer(OptimizerConfig config, std::vector<Parameter*> params);

  /// Applies one update from the parameters' accumulated gradients and
  /// increments the step counter. Gradients are left untouched.
  void step();
  void zero_grad();

  std::uint64_t step_count() const { return step_; }
  const OptimizerConfig& config() const { return config_; }

 private:
  OptimizerConfig config_;
  std::vector<Parameter*> params_;
  struct Slot {
    Tensor first;   // Adam m / RMSProp+Adadelta squared-gradient average
    Tensor second;  // Adam v / Adadelta squared-update average
  };
  std::vector<Slot> slots_;
  std::uint64_t step_ = 0;
};

}  // namespace stocksel::nn
