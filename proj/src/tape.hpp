#pragma once

#include <functional>
#include <vector>

#include "rng.hpp"
#include "tensor.hpp"

namespace stocksel::nn {

/// Reverse-mode differentiation tape. Nodes are appended during the forward
/// pass; backward() walks them in reverse creation order and accumulates
/// gradients, ending with every bound Parameter's grad populated.
///
/// One tape records one forward pass; single-threaded by construction.
class Tape {
 public:
  using NodeId = int;

  /// Leaf holding a constant input (no gradient flows out of it).
  NodeId input(Tensor value);
  /// Leaf bound to a parameter; backward() adds into p.grad.
  NodeId param(Parameter& p);

  NodeId matmul(NodeId a, NodeId b);
  /// a(m,k) * b(n,k)^T; the convention for conv kernels stored KxF.
  NodeId matmul_nt(NodeId a, NodeId b);
  NodeId add(NodeId a, NodeId b);
  /// Broadcasts a 1xN bias over every row of a.
  NodeId add_rowvec(NodeId a, NodeId bias);
  NodeId sigmoid(NodeId a);
  NodeId tanh_op(NodeId a);
  NodeId relu(NodeId a);
  NodeId hadamard(NodeId a, NodeId b);
  NodeId scale(NodeId a, double factor);
  NodeId reshape(NodeId a, std::size_t rows, std::size_t cols);
  /// Extracts row r as a 1xN tensor.
  NodeId row(NodeId a, std::size_t r);
  /// Sum of squared entries -> 1x1.
  NodeId sum_squares(NodeId a);
  /// Row-wise shift-invariant softmax.
  NodeId softmax_rows(NodeId scores);
  /// Mean negative log-likelihood of one-hot targets; probabilities are
  /// floored at 1e-12 inside the log. -> 1x1.
  NodeId cross_entropy(NodeId probs, Tensor one_hot);
  /// Inverted elementwise dropout: zero with prob 1-keep, survivors scaled
  /// by 1/keep. Identity when keep == 1.
  NodeId dropout_elementwise(NodeId a, double keep, rng::Rng& rng);
  /// Zeroes exactly n_drop distinct columns chosen uniformly; remaining
  /// columns are scaled by cols/(cols-n_drop).
  NodeId dropout_columns(NodeId a, int n_drop, rng::Rng& rng);
  /// Pairwise row pooling (stride 2) within blocks of rows_per_instance
  /// rows. rows_per_instance must be even.
  NodeId pool_rows_pairwise(NodeId a, bool max_pool, std::size_t rows_per_instance);
  /// Temporal conv over 3 consecutive rows within each instance block:
  /// out[t][j] = relu(sum_{d,k} in[t+d][k] * w[j][k*3+d] + b[j]).
  /// w is (out_channels x in_channels*3); output has T-2 rows per instance.
  NodeId conv_rows3(NodeId a, NodeId w, NodeId bias, std::size_t rows_per_instance);

  const Tensor& value(NodeId id) const;
  const Tensor& grad(NodeId id) const;
  std::size_t node_count() const { return nodes_.size(); }
  /// Ids of every param() leaf recorded on this tape, in creation order.
  const std::vector<NodeId>& param_nodes() const { return param_nodes_; }

  /// Reverse-mode accumulation from a scalar loss node. GraphNotRecorded if
  /// the id is not a recorded node of this tape.
  void backward(NodeId loss);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    Parameter* bound = nullptr;
    std::function<void(Tape&, Node&)> back;  // pull node.grad into parents
  };

  NodeId push(Tensor value, std::function<void(Tape&, Node&)> back);
  Node& node(NodeId id);
  void check_id(NodeId id) const;

  std::vector<Node> nodes_;
  std::vector<NodeId> param_nodes_;
};

}  // namespace stocksel::nn
