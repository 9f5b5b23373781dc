#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tape.hpp"
#include "tensor.hpp"

namespace stocksel::nn {

/// Gate parameters of one LSTM cell. W_x* are input_dim x hidden, W_h* are
/// hidden x hidden, biases are 1 x hidden. Row-vector convention: the gate
/// pre-activation for input x (1 x input_dim) is x*W_x + h*W_h + b, which is
/// the transposed-weight form of the cell equations.
struct LstmCellParams {
  std::size_t input_dim = 0;
  std::size_t hidden = 0;
  Parameter w_xi, w_hi, w_xf, w_hf, w_xo, w_ho, w_xg, w_hg;
  Parameter b_i, b_f, b_o, b_g;

  LstmCellParams() = default;
  /// Uniform fan-in init, biases zero except forget-gate bias +1.
  LstmCellParams(std::size_t input_dim, std::size_t hidden, rng::Rng& rng,
                 const std::string& prefix = "lstm");

  std::vector<Parameter*> parameters();
};

struct DenseParams {
  Parameter w;  // in x out
  Parameter b;  // 1 x out

  DenseParams() = default;
  DenseParams(std::size_t in, std::size_t out, rng::Rng& rng, const std::string& prefix);

  std::vector<Parameter*> parameters();
};

/// 1xF convolution: kernels are num_kernels x feature_width, each kernel
/// combines the per-row features into one higher-level feature.
struct Conv1xFParams {
  Parameter kernels;  // K x F
  Parameter biases;   // 1 x K

  Conv1xFParams() = default;
  Conv1xFParams(std::size_t num_kernels, std::size_t feature_width, rng::Rng& rng,
                const std::string& prefix = "conv");

  std::size_t num_kernels() const { return kernels.value.rows(); }
  std::size_t feature_width() const { return kernels.value.cols(); }
  std::vector<Parameter*> parameters();
};

enum class DropoutKind { Elementwise, SpatialColumns };

struct DropoutSpec {
  DropoutKind kind = DropoutKind::Elementwise;
  double keep_probability = 0.8;  // elementwise
  int columns_dropped = 0;        // spatial
  std::uint64_t seed = 0;
};

/// One LSTM cell step. x is 1 x input_dim, h_prev and c_prev are 1 x hidden.
/// Returns (h_t, c_t); the cell output y_t equals h_t.
std::pair<Tensor, Tensor> lstm_cell_forward(const Tensor& x, const Tensor& h_prev,
                                            const Tensor& c_prev, const LstmCellParams& p);

/// Runs the cell over seq (steps x input_dim) from zero initial state and
/// returns the final hidden state; optionally collects every h_t.
Tensor lstm_layer_forward(const Tensor& seq, const LstmCellParams& p,
                          std::vector<Tensor>* all_hidden = nullptr);

/// output[t][k] = relu(sum_j input[t][j] * kernel_k[j] + bias_k); rows stay
/// independent (no temporal mixing).
Tensor conv_1xf_forward(const Tensor& input, const Conv1xFParams& p);

/// Row-wise shift-invariant softmax; each output row sums to 1.
Tensor softmax(const Tensor& scores);

/// Mean negative log-likelihood; pred rows are probabilities, truth rows
/// one-hot. Probabilities are floored at 1e-12 inside the log.
double cross_entropy_loss(const Tensor& pred_probs, const Tensor& one_hot);

/// (lambda / 2n) * sum w^2 over every entry of every parameter, with n the
/// total parameter count of the model.
double l2_penalty(std::span<Parameter* const> params, double lambda);

/// Standalone dropout with the spec's own seed; training=false is the exact
/// identity.
Tensor dropout_forward(const Tensor& x, const DropoutSpec& spec, bool training);

// --- tape builders (training path) ---

struct LstmNodes {
  Tape::NodeId w_xi, w_hi, w_xf, w_hf, w_xo, w_ho, w_xg, w_hg;
  Tape::NodeId b_i, b_f, b_o, b_g;
};

LstmNodes bind_lstm(Tape& tape, LstmCellParams& p);

/// One cell step on the tape; x/h/c may be batched (B x dim).
std::pair<Tape::NodeId, Tape::NodeId> lstm_cell(Tape& tape, Tape::NodeId x, Tape::NodeId h_prev,
                                                Tape::NodeId c_prev, const LstmNodes& nodes);

/// Batched layer: step_inputs[t] is the B x input_dim slice at step t.
/// Returns the final hidden state node (B x hidden).
Tape::NodeId lstm_layer(Tape& tape, const std::vector<Tape::NodeId>& step_inputs,
                        LstmCellParams& p);

Tape::NodeId dense(Tape& tape, Tape::NodeId x, DenseParams& p);
Tape::NodeId conv_1xf(Tape& tape, Tape::NodeId x, Conv1xFParams& p);

}  // namespace stocksel::nn
