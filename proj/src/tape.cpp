#include "tape.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace stocksel::nn {

Tape::NodeId Tape::push(Tensor value, std::function<void(Tape&, Node&)> back) {
  Node n;
  n.value = std::move(value);
  n.grad = Tensor(n.value.rows(), n.value.cols());
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

Tape::Node& Tape::node(NodeId id) {
  check_id(id);
  return nodes_[static_cast<std::size_t>(id)];
}

void Tape::check_id(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) {
    throw Error(ErrorKind::GraphNotRecorded,
                "node " + std::to_string(id) + " is not on this tape");
  }
}

const Tensor& Tape::value(NodeId id) const {
  check_id(id);
  return nodes_[static_cast<std::size_t>(id)].value;
}

const Tensor& Tape::grad(NodeId id) const {
  check_id(id);
  return nodes_[static_cast<std::size_t>(id)].grad;
}

Tape::NodeId Tape::input(Tensor value) {
  return push(std::move(value), nullptr);
}

Tape::NodeId Tape::param(Parameter& p) {
  const NodeId id = push(p.value, nullptr);
  nodes_.back().bound = &p;
  param_nodes_.push_back(id);
  return id;
}

Tape::NodeId Tape::matmul(NodeId a, NodeId b) {
  Tensor out = nn::matmul(value(a), value(b));
  return push(std::move(out), [a, b](Tape& t, Node& n) {
    matmul_nt_acc(t.node(a).grad, n.grad, t.node(b).value);  // dA += dC * B^T
    matmul_tn_acc(t.node(b).grad, t.node(a).value, n.grad);  // dB += A^T * dC
  });
}

Tape::NodeId Tape::matmul_nt(NodeId a, NodeId b) {
  Tensor out = nn::matmul_nt(value(a), value(b));
  return push(std::move(out), [a, b](Tape& t, Node& n) {
    matmul_acc(t.node(a).grad, n.grad, t.node(b).value);     // dA += dC * B
    matmul_tn_acc(t.node(b).grad, n.grad, t.node(a).value);  // dB += dC^T * A
  });
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
  check_shape(value(a).same_shape(value(b)), "add shapes");
  Tensor out = value(a);
  add_inplace(out, value(b));
  return push(std::move(out), [a, b](Tape& t, Node& n) {
    add_inplace(t.node(a).grad, n.grad);
    add_inplace(t.node(b).grad, n.grad);
  });
}

Tape::NodeId Tape::add_rowvec(NodeId a, NodeId bias) {
  const Tensor& va = value(a);
  const Tensor& vb = value(bias);
  check_shape(vb.rows() == 1 && vb.cols() == va.cols(), "add_rowvec shapes");
  Tensor out = va;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) out.at(r, c) += vb.at(0, c);
  }
  return push(std::move(out), [a, bias](Tape& t, Node& n) {
    add_inplace(t.node(a).grad, n.grad);
    Tensor& gb = t.node(bias).grad;
    for (std::size_t r = 0; r < n.grad.rows(); ++r) {
      for (std::size_t c = 0; c < n.grad.cols(); ++c) gb.at(0, c) += n.grad.at(r, c);
    }
  });
}

Tape::NodeId Tape::sigmoid(NodeId a) {
  Tensor out = value(a);
  for (double& x : out.values()) x = 1.0 / (1.0 + std::exp(-x));
  return push(std::move(out), [a](Tape& t, Node& n) {
    Tensor& ga = t.node(a).grad;
    for (std::size_t i = 0; i < n.value.size(); ++i) {
      const double y = n.value.values()[i];
      ga.values()[i] += n.grad.values()[i] * y * (1.0 - y);
    }
  });
}

Tape::NodeId Tape::tanh_op(NodeId a) {
  Tensor out = value(a);
  for (double& x : out.values()) x = std::tanh(x);
  return push(std::move(out), [a](Tape& t, Node& n) {
    Tensor& ga = t.node(a).grad;
    for (std::size_t i = 0; i < n.value.size(); ++i) {
      const double y = n.value.values()[i];
      ga.values()[i] += n.grad.values()[i] * (1.0 - y * y);
    }
  });
}

Tape::NodeId Tape::relu(NodeId a) {
  Tensor out = value(a);
  for (double& x : out.values()) x = x > 0.0 ? x : 0.0;
  return push(std::move(out), [a](Tape& t, Node& n) {
    Tensor& ga = t.node(a).grad;
    const Tensor& va = t.node(a).value;
    for (std::size_t i = 0; i < n.value.size(); ++i) {
      if (va.values()[i] > 0.0) ga.values()[i] += n.grad.values()[i];
    }
  });
}

Tape::NodeId Tape::hadamard(NodeId a, NodeId b) {
  check_shape(value(a).same_shape(value(b)), "hadamard shapes");
  Tensor out = value(a);
  const Tensor& vb = value(b);
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] *= vb.values()[i];
  return push(std::move(out), [a, b](Tape& t, Node& n) {
    Tensor& ga = t.node(a).grad;
    Tensor& gb = t.node(b).grad;
    const Tensor& va = t.node(a).value;
    const Tensor& vb2 = t.node(b).value;
    for (std::size_t i = 0; i < n.grad.size(); ++i) {
      ga.values()[i] += n.grad.values()[i] * vb2.values()[i];
      gb.values()[i] += n.grad.values()[i] * va.values()[i];
    }
  });
}

Tape::NodeId Tape::scale(NodeId a, double factor) {
  Tensor out = value(a);
  for (double& x : out.values()) x *= factor;
  return push(std::move(out), [a, factor](Tape& t, Node& n) {
    axpy(t.node(a).grad, factor, n.grad);
  });
}

Tape::NodeId Tape::reshape(NodeId a, std::size_t rows, std::size_t cols) {
  Tensor out = value(a);
  out.reshape(rows, cols);
  return push(std::move(out), [a](Tape& t, Node& n) {
    Tensor& ga = t.node(a).grad;
    for (std::size_t i = 0; i < n.grad.size(); ++i) ga.values()[i] += n.grad.values()[i];
  });
}

Tape::NodeId Tape::row(NodeId a, std::size_t r) {
  const Tensor& va = value(a);
  check_shape(r < va.rows(), "row index");
  Tensor out(1, va.cols());
  for (std::size_t c = 0; c < va.cols(); ++c) out.at(0, c) = va.at(r, c);
  return push(std::move(out), [a, r](Tape& t, Node& n) {
    Tensor& ga = t.node(a).grad;
    for (std::size_t c = 0; c < n.grad.cols(); ++c) ga.at(r, c) += n.grad.at(0, c);
  });
}

Tape::NodeId Tape::sum_squares(NodeId a) {
  const Tensor& va = value(a);
  double s = 0.0;
  for (double x : va.values()) s += x * x;
  Tensor out(1, 1);
  out.at(0, 0) = s;
  return push(std::move(out), [a](Tape& t, Node& n) {
    const double g = n.grad.at(0, 0);
    Tensor& ga = t.node(a).grad;
    const Tensor& va2 = t.node(a).value;
    for (std::size_t i = 0; i < va2.size(); ++i) ga.values()[i] += 2.0 * g * va2.values()[i];
  });
}

Tape::NodeId Tape::softmax_rows(NodeId scores) {
  const Tensor& s = value(scores);
  if (!s.all_finite()) throw Error(ErrorKind::NonFiniteInput, "softmax scores");
  Tensor out(s.rows(), s.cols());
  for (std::size_t r = 0; r < s.rows(); ++r) {
    double mx = s.at(r, 0);
    for (std::size_t c = 1; c < s.cols(); ++c) mx = std::max(mx, s.at(r, c));
    double sum = 0.0;
    for (std::size_t c = 0; c < s.cols(); ++c) {
      const double e = std::exp(s.at(r, c) - mx);
      out.at(r, c) = e;
      sum += e;
    }
    for (std::size_t c = 0; c < s.cols(); ++c) out.at(r, c) /= sum;
  }
  return push(std::move(out), [scores](Tape& t, Node& n) {
    // dL/ds_j = p_j * (dL/dp_j - sum_c dL/dp_c * p_c) per row
    Tensor& gs = t.node(scores).grad;
    for (std::size_t r = 0; r < n.value.rows(); ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < n.value.cols(); ++c) {
        dot += n.grad.at(r, c) * n.value.at(r, c);
      }
      for (std::size_t c = 0; c < n.value.cols(); ++c) {
        gs.at(r, c) += n.value.at(r, c) * (n.grad.at(r, c) - dot);
      }
    }
  });
}

Tape::NodeId Tape::cross_entropy(NodeId probs, Tensor one_hot) {
  const Tensor& p = value(probs);
  check_shape(p.same_shape(one_hot), "cross_entropy shapes");
  constexpr double kEps = 1e-12;  // floor keeps confident misses finite
  const double m = static_cast<double>(p.rows());
  double loss = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double y = one_hot.values()[i];
    if (y != 0.0) loss -= y * std::log(std::max(p.values()[i], kEps));
  }
  Tensor out(1, 1);
  out.at(0, 0) = loss / m;
  auto y = std::make_shared<Tensor>(std::move(one_hot));
  return push(std::move(out), [probs, y, m](Tape& t, Node& n) {
    const double g = n.grad.at(0, 0);
    Tensor& gp = t.node(probs).grad;
    const Tensor& p2 = t.node(probs).value;
    for (std::size_t i = 0; i < p2.size(); ++i) {
      const double yi = y->values()[i];
      // below the floor the forward is constant, so the derivative vanishes
      if (yi != 0.0 && p2.values()[i] > kEps) {
        gp.values()[i] -= g * yi / (m * p2.values()[i]);
      }
    }
  });
}

Tape::NodeId Tape::dropout_elementwise(NodeId a, double keep, rng::Rng& rng) {
  if (!(keep > 0.0 && keep <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "keep probability out of (0,1]");
  const Tensor& va = value(a);
  auto mask = std::make_shared<Tensor>(va.rows(), va.cols());
  const double inv = 1.0 / keep;
  for (double& m : mask->values()) m = rng.uniform01() < keep ? inv : 0.0;
  Tensor out = va;
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] *= mask->values()[i];
  return push(std::move(out), [a, mask](Tape& t, Node& n) {
    Tensor& ga = t.node(a).grad;
    for (std::size_t i = 0; i < n.grad.size(); ++i) {
      ga.values()[i] += n.grad.values()[i] * mask->values()[i];
    }
  });
}

Tape::NodeId Tape::dropout_columns(NodeId a, int n_drop, rng::Rng& rng) {
  const Tensor& va = value(a);
  const int cols = static_cast<int>(va.cols());
  if (n_drop < 0 || n_drop >= cols)
    throw Error(ErrorKind::InvalidConfig, "columns_dropped out of [0, cols)");
  // uniform distinct column choice via partial Fisher-Yates
  std::vector<int> idx(static_cast<std::size_t>(cols));
  for (int i = 0; i < cols; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < n_drop; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(cols - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  auto mask = std::make_shared<std::vector<double>>(static_cast<std::size_t>(cols),
                                                    static_cast<double>(cols) /
                                                        static_cast<double>(cols - n_drop));
  for (int i = 0; i < n_drop; ++i) (*mask)[static_cast<std::size_t>(idx[i])] = 0.0;

  Tensor out = va;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) out.at(r, c) *= (*mask)[c];
  }
  return push(std::move(out), [a, mask](Tape& t, Node& n) {
    Tensor& ga = t.node(a).grad;
    for (std::size_t r = 0; r < n.grad.rows(); ++r) {
      for (std::size_t c = 0; c < n.grad.cols(); ++c) {
        ga.at(r, c) += n.grad.at(r, c) * (*mask)[c];
      }
    }
  });
}

Tape::NodeId Tape::pool_rows_pairwise(NodeId a, bool max_pool, std::size_t rows_per_instance) {
  const Tensor& va = value(a);
  check_shape(rows_per_instance % 2 == 0 && va.rows() % rows_per_instance == 0,
              "pool_rows_pairwise layout");
  Tensor out(va.rows() / 2, va.cols());
  auto argmax = std::make_shared<std::vector<std::uint8_t>>();
  if (max_pool) argmax->resize(out.size());
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < va.cols(); ++c) {
      const double x0 = va.at(2 * r, c);
      const double x1 = va.at(2 * r + 1, c);
      if (max_pool) {
        out.at(r, c) = std::max(x0, x1);
        (*argmax)[r * va.cols() + c] = x1 > x0 ? 1 : 0;
      } else {
        out.at(r, c) = 0.5 * (x0 + x1);
      }
    }
  }
  return push(std::move(out), [a, max_pool, argmax](Tape& t, Node& n) {
    Tensor& ga = t.node(a).grad;
    for (std::size_t r = 0; r < n.grad.rows(); ++r) {
      for (std::size_t c = 0; c < n.grad.cols(); ++c) {
        const double g = n.grad.at(r, c);
        if (max_pool) {
          ga.at(2 * r + (*argmax)[r * n.grad.cols() + c], c) += g;
        } else {
          ga.at(2 * r, c) += 0.5 * g;
          ga.at(2 * r + 1, c) += 0.5 * g;
        }
      }
    }
  });
}

Tape::NodeId Tape::conv_rows3(NodeId a, NodeId w, NodeId bias, std::size_t rows_per_instance) {
  const Tensor& va = value(a);
  const Tensor& vw = value(w);
  const Tensor& vb = value(bias);
  const std::size_t in_ch = va.cols();
  const std::size_t out_ch = vw.rows();
  check_shape(rows_per_instance >= 3 && va.rows() % rows_per_instance == 0,
              "conv_rows3 layout");
  check_shape(vw.cols() == in_ch * 3 && vb.rows() == 1 && vb.cols() == out_ch,
              "conv_rows3 weight shapes");
  const std::size_t instances = va.rows() / rows_per_instance;
  const std::size_t out_rows_per = rows_per_instance - 2;
  Tensor pre(instances * out_rows_per, out_ch);
  for (std::size_t inst = 0; inst < instances; ++inst) {
    for (std::size_t t = 0; t < out_rows_per; ++t) {
      const std::size_t in_base = inst * rows_per_instance + t;
      const std::size_t out_r = inst * out_rows_per + t;
      for (std::size_t j = 0; j < out_ch; ++j) {
        double sum = vb.at(0, j);
        for (std::size_t d = 0; d < 3; ++d) {
          for (std::size_t k = 0; k < in_ch; ++k) {
            sum += va.at(in_base + d, k) * vw.at(j, k * 3 + d);
          }
        }
        pre.at(out_r, j) = sum;
      }
    }
  }
  Tensor out = pre;
  for (double& x : out.values()) x = x > 0.0 ? x : 0.0;
  auto pre_shared = std::make_shared<Tensor>(std::move(pre));
  return push(std::move(out),
              [a, w, bias, rows_per_instance, out_rows_per, in_ch, out_ch, instances,
               pre_shared](Tape& t, Node& n) {
                Tensor& ga = t.node(a).grad;
                Tensor& gw = t.node(w).grad;
                Tensor& gb = t.node(bias).grad;
                const Tensor& va2 = t.node(a).value;
                const Tensor& vw2 = t.node(w).value;
                for (std::size_t inst = 0; inst < instances; ++inst) {
                  for (std::size_t tt = 0; tt < out_rows_per; ++tt) {
                    const std::size_t in_base = inst * rows_per_instance + tt;
                    const std::size_t out_r = inst * out_rows_per + tt;
                    for (std::size_t j = 0; j < out_ch; ++j) {
                      if (pre_shared->at(out_r, j) <= 0.0) continue;
                      const double g = n.grad.at(out_r, j);
                      if (g == 0.0) continue;
                      gb.at(0, j) += g;
                      for (std::size_t d = 0; d < 3; ++d) {
                        for (std::size_t k = 0; k < in_ch; ++k) {
                          gw.at(j, k * 3 + d) += g * va2.at(in_base + d, k);
                          ga.at(in_base + d, k) += g * vw2.at(j, k * 3 + d);
                        }
                      }
                    }
                  }
                }
              });
}

void Tape::backward(NodeId loss) {
  check_id(loss);
  if (nodes_.empty()) throw Error(ErrorKind::GraphNotRecorded, "empty tape");
  Node& top = nodes_[static_cast<std::size_t>(loss)];
  check_shape(top.value.rows() == 1 && top.value.cols() == 1, "backward needs a scalar loss");
  top.grad.at(0, 0) = 1.0;
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    Node& n = nodes_[i];
    if (n.back) n.back(*this, n);
    if (n.bound) add_inplace(n.bound->grad, n.grad);
  }
}

}  // namespace stocksel::nn
