#include "layers.hpp"

#include <cmath>

namespace stocksel::nn {

LstmCellParams::LstmCellParams(std::size_t input_dim, std::size_t hidden, rng::Rng& rng,
                               const std::string& prefix)
    : input_dim(input_dim), hidden(hidden) {
  auto wx = [&](const char* gate) {
    return Parameter(prefix + ".w_x" + gate, uniform_fanin(input_dim, hidden, input_dim, rng));
  };
  auto wh = [&](const char* gate) {
    return Parameter(prefix + ".w_h" + gate, uniform_fanin(hidden, hidden, hidden, rng));
  };
  w_xi = wx("i");
  w_hi = wh("i");
  w_xf = wx("f");
  w_hf = wh("f");
  w_xo = wx("o");
  w_ho = wh("o");
  w_xg = wx("g");
  w_hg = wh("g");
  b_i = Parameter(prefix + ".b_i", Tensor(1, hidden));
  b_f = Parameter(prefix + ".b_f", Tensor::full(1, hidden, 1.0));  // open forget gate
  b_o = Parameter(prefix + ".b_o", Tensor(1, hidden));
  b_g = Parameter(prefix + ".b_g", Tensor(1, hidden));
}

std::vector<Parameter*> LstmCellParams::parameters() {
  return {&w_xi, &w_hi, &w_xf, &w_hf, &w_xo, &w_ho, &w_xg, &w_hg, &b_i, &b_f, &b_o, &b_g};
}

DenseParams::DenseParams(std::size_t in, std::size_t out, rng::Rng& rng,
                         const std::string& prefix)
    : w(prefix + ".w", uniform_fanin(in, out, in, rng)), b(prefix + ".b", Tensor(1, out)) {}

std::vector<Parameter*> DenseParams::parameters() {
  return {&w, &b};
}

Conv1xFParams::Conv1xFParams(std::size_t num_kernels, std::size_t feature_width, rng::Rng& rng,
                             const std::string& prefix)
    : kernels(prefix + ".kernels", uniform_fanin(num_kernels, feature_width, feature_width, rng)),
      biases(prefix + ".biases", Tensor(1, num_kernels)) {}

std::vector<Parameter*> Conv1xFParams::parameters() {
  return {&kernels, &biases};
}

namespace {

void check_cell_shapes(const Tensor& x, const Tensor& h_prev, const Tensor& c_prev,
                       const LstmCellParams& p) {
  check_shape(x.cols() == p.input_dim, "lstm x width");
  check_shape(h_prev.cols() == p.hidden && c_prev.cols() == p.hidden, "lstm state width");
  check_shape(x.rows() == h_prev.rows() && x.rows() == c_prev.rows(), "lstm batch rows");
}

Tensor gate_preact(const Tensor& x, const Tensor& h, const Parameter& wx, const Parameter& wh,
                   const Parameter& b) {
  Tensor g = matmul(x, wx.value);
  matmul_acc(g, h, wh.value);
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.cols(); ++c) g.at(r, c) += b.value.at(0, c);
  }
  return g;
}

void sigmoid_inplace(Tensor& t) {
  for (double& x : t.values()) x = 1.0 / (1.0 + std::exp(-x));
}

void tanh_inplace(Tensor& t) {
  for (double& x : t.values()) x = std::tanh(x);
}

}  // namespace

std::pair<Tensor, Tensor> lstm_cell_forward(const Tensor& x, const Tensor& h_prev,
                                            const Tensor& c_prev, const LstmCellParams& p) {
  check_cell_shapes(x, h_prev, c_prev, p);
  Tensor i = gate_preact(x, h_prev, p.w_xi, p.w_hi, p.b_i);
  Tensor f = gate_preact(x, h_prev, p.w_xf, p.w_hf, p.b_f);
  Tensor o = gate_preact(x, h_prev, p.w_xo, p.w_ho, p.b_o);
  Tensor g = gate_preact(x, h_prev, p.w_xg, p.w_hg, p.b_g);
  sigmoid_inplace(i);
  sigmoid_inplace(f);
  sigmoid_inplace(o);
  tanh_inplace(g);

  Tensor c(c_prev.rows(), c_prev.cols());
  for (std::size_t k = 0; k < c.size(); ++k) {
    c.values()[k] = f.values()[k] * c_prev.values()[k] + i.values()[k] * g.values()[k];
  }
  Tensor h = c;
  tanh_inplace(h);
  for (std::size_t k = 0; k < h.size(); ++k) h.values()[k] *= o.values()[k];
  return {std::move(h), std::move(c)};
}

Tensor lstm_layer_forward(const Tensor& seq, const LstmCellParams& p,
                          std::vector<Tensor>* all_hidden) {
  check_shape(seq.rows() >= 1, "lstm needs at least one step");
  Tensor h(1, p.hidden);
  Tensor c(1, p.hidden);
  Tensor x(1, p.input_dim);
  for (std::size_t t = 0; t < seq.rows(); ++t) {
    for (std::size_t j = 0; j < p.input_dim; ++j) x.at(0, j) = seq.at(t, j);
    auto [h_t, c_t] = lstm_cell_forward(x, h, c, p);
    h = std::move(h_t);
    c = std::move(c_t);
    if (all_hidden) all_hidden->push_back(h);
  }
  return h;
}

Tensor conv_1xf_forward(const Tensor& input, const Conv1xFParams& p) {
  check_shape(input.cols() == p.feature_width(), "conv feature width");
  Tensor out = matmul_nt(input, p.kernels.value);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      const double v = out.at(r, c) + p.biases.value.at(0, c);
      out.at(r, c) = v > 0.0 ? v : 0.0;
    }
  }
  return out;
}

Tensor softmax(const Tensor& scores) {
  if (!scores.all_finite()) throw Error(ErrorKind::NonFiniteInput, "softmax scores");
  Tensor out(scores.rows(), scores.cols());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    double mx = scores.at(r, 0);
    for (std::size_t c = 1; c < scores.cols(); ++c) mx = std::max(mx, scores.at(r, c));
    double sum = 0.0;
    for (std::size_t c = 0; c < scores.cols(); ++c) {
      const double e = std::exp(scores.at(r, c) - mx);
      out.at(r, c) = e;
      sum += e;
    }
    for (std::size_t c = 0; c < scores.cols(); ++c) out.at(r, c) /= sum;
  }
  return out;
}

double cross_entropy_loss(const Tensor& pred_probs, const Tensor& one_hot) {
  check_shape(pred_probs.same_shape(one_hot), "cross_entropy shapes");
  constexpr double kEps = 1e-12;
  double loss = 0.0;
  for (std::size_t i = 0; i < pred_probs.size(); ++i) {
    const double y = one_hot.values()[i];
    if (y != 0.0) loss -= y * std::log(std::max(pred_probs.values()[i], kEps));
  }
  return loss / static_cast<double>(pred_probs.rows());
}

double l2_penalty(std::span<Parameter* const> params, double lambda) {
  if (lambda < 0.0) throw Error(ErrorKind::InvalidConfig, "lambda must be >= 0");
  if (lambda == 0.0) return 0.0;
  double sumsq = 0.0;
  std::size_t n = 0;
  for (const Parameter* p : params) {
    n += p->value.size();
    for (double w : p->value.values()) sumsq += w * w;
  }
  if (n == 0) return 0.0;
  return lambda / (2.0 * static_cast<double>(n)) * sumsq;
}

Tensor dropout_forward(const Tensor& x, const DropoutSpec& spec, bool training) {
  if (!training) return x;  // all neurons participate when predicting
  rng::Rng rng(spec.seed);
  Tape tape;
  const Tape::NodeId in = tape.input(x);
  const Tape::NodeId out = spec.kind == DropoutKind::Elementwise
                               ? tape.dropout_elementwise(in, spec.keep_probability, rng)
                               : tape.dropout_columns(in, spec.columns_dropped, rng);
  return tape.value(out);
}

LstmNodes bind_lstm(Tape& tape, LstmCellParams& p) {
  LstmNodes n;
  n.w_xi = tape.param(p.w_xi);
  n.w_hi = tape.param(p.w_hi);
  n.w_xf = tape.param(p.w_xf);
  n.w_hf = tape.param(p.w_hf);
  n.w_xo = tape.param(p.w_xo);
  n.w_ho = tape.param(p.w_ho);
  n.w_xg = tape.param(p.w_xg);
  n.w_hg = tape.param(p.w_hg);
  n.b_i = tape.param(p.b_i);
  n.b_f = tape.param(p.b_f);
  n.b_o = tape.param(p.b_o);
  n.b_g = tape.param(p.b_g);
  return n;
}

std::pair<Tape::NodeId, Tape::NodeId> lstm_cell(Tape& tape, Tape::NodeId x, Tape::NodeId h_prev,
                                                Tape::NodeId c_prev, const LstmNodes& nodes) {
  auto gate = [&](Tape::NodeId wx, Tape::NodeId wh, Tape::NodeId b) {
    return tape.add_rowvec(tape.add(tape.matmul(x, wx), tape.matmul(h_prev, wh)), b);
  };
  const Tape::NodeId i = tape.sigmoid(gate(nodes.w_xi, nodes.w_hi, nodes.b_i));
  const Tape::NodeId f = tape.sigmoid(gate(nodes.w_xf, nodes.w_hf, nodes.b_f));
  const Tape::NodeId o = tape.sigmoid(gate(nodes.w_xo, nodes.w_ho, nodes.b_o));
  const Tape::NodeId g = tape.tanh_op(gate(nodes.w_xg, nodes.w_hg, nodes.b_g));
  const Tape::NodeId c = tape.add(tape.hadamard(f, c_prev), tape.hadamard(i, g));
  const Tape::NodeId h = tape.hadamard(o, tape.tanh_op(c));
  return {h, c};
}

Tape::NodeId lstm_layer(Tape& tape, const std::vector<Tape::NodeId>& step_inputs,
                        LstmCellParams& p) {
  check_shape(!step_inputs.empty(), "lstm needs at least one step");
  const LstmNodes nodes = bind_lstm(tape, p);
  const std::size_t batch = tape.value(step_inputs.front()).rows();
  Tape::NodeId h = tape.input(Tensor(batch, p.hidden));
  Tape::NodeId c = tape.input(Tensor(batch, p.hidden));
  for (const Tape::NodeId x : step_inputs) {
    auto [h_t, c_t] = lstm_cell(tape, x, h, c, nodes);
    h = h_t;
    c = c_t;
  }
  return h;
}

Tape::NodeId dense(Tape& tape, Tape::NodeId x, DenseParams& p) {
  return tape.add_rowvec(tape.matmul(x, tape.param(p.w)), tape.param(p.b));
}

Tape::NodeId conv_1xf(Tape& tape, Tape::NodeId x, Conv1xFParams& p) {
  return tape.relu(
      tape.add_rowvec(tape.matmul_nt(x, tape.param(p.kernels)), tape.param(p.biases)));
}

}  // namespace stocksel::nn
