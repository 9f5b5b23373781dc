#include "optim.hpp"

#include <cmath>

#include "error.hpp"

namespace stocksel::nn {

const char* to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::Adam: return "adam";
    case OptimizerKind::RmsProp: return "rmsprop";
    case OptimizerKind::Adadelta: return "adadelta";
  }
  return "?";
}

OptimizerKind optimizer_from_string(const std::string& text) {
  if (text == "adam") return OptimizerKind::Adam;
  if (text == "rmsprop") return OptimizerKind::RmsProp;
  if (text == "adadelta") return OptimizerKind::Adadelta;
  throw Error(ErrorKind::InvalidConfig, "unknown optimizer " + text);
}

Optimizer::Optimizer(OptimizerConfig config, std::vector<Parameter*> params)
    : config_(config), params_(std::move(params)) {
  slots_.reserve(params_.size());
  for (const Parameter* p : params_) {
    Slot s;
    s.first = Tensor(p->value.rows(), p->value.cols());
    s.second = Tensor(p->value.rows(), p->value.cols());
    slots_.push_back(std::move(s));
  }
}

void Optimizer::zero_grad() {
  for (Parameter* p : params_) p->zero_grad();
}

void Optimizer::step() {
  ++step_;
  const double t = static_cast<double>(step_);
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Parameter& p = *params_[k];
    check_shape(p.grad.same_shape(p.value), "gradient shape");
    Slot& s = slots_[k];
    double* w = p.value.data();
    const double* g = p.grad.data();
    double* m1 = s.first.data();
    double* m2 = s.second.data();
    const std::size_t n = p.value.size();

    switch (config_.kind) {
      case OptimizerKind::Adam: {
        const double b1 = config_.adam_beta1, b2 = config_.adam_beta2;
        const double corr1 = 1.0 - std::pow(b1, t);
        const double corr2 = 1.0 - std::pow(b2, t);
        for (std::size_t i = 0; i < n; ++i) {
          m1[i] = b1 * m1[i] + (1.0 - b1) * g[i];
          m2[i] = b2 * m2[i] + (1.0 - b2) * g[i] * g[i];
          const double mhat = m1[i] / corr1;
          const double vhat = m2[i] / corr2;
          w[i] -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.adam_eps);
        }
        break;
      }
      case OptimizerKind::RmsProp: {
        const double rho = config_.rms_rho;
        for (std::size_t i = 0; i < n; ++i) {
          m1[i] = rho * m1[i] + (1.0 - rho) * g[i] * g[i];
          w[i] -= config_.learning_rate * g[i] / (std::sqrt(m1[i]) + config_.rms_eps);
        }
        break;
      }
      case OptimizerKind::Adadelta: {
        const double rho = config_.ada_rho, eps = config_.ada_eps;
        for (std::size_t i = 0; i < n; ++i) {
          m1[i] = rho * m1[i] + (1.0 - rho) * g[i] * g[i];
          const double delta = -std::sqrt(m2[i] + eps) / std::sqrt(m1[i] + eps) * g[i];
          m2[i] = rho * m2[i] + (1.0 - rho) * delta * delta;
          w[i] += config_.learning_rate * delta;
        }
        break;
      }
    }
  }
}

}  // namespace stocksel::nn
