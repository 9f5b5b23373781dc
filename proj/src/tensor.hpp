#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "error.hpp"
#include "rng.hpp"

namespace stocksel::nn {

/// Dense row-major matrix of doubles. Vectors are 1xN.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), v_(rows * cols, 0.0) {}
  Tensor(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Tensor full(std::size_t rows, std::size_t cols, double value);
  static Tensor row(std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  bool same_shape(const Tensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  double& at(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  void fill(double value);
  void reshape(std::size_t rows, std::size_t cols);  // ShapeMismatch if size changes

  bool all_finite() const;

  bool operator==(const Tensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && v_ == o.v_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> v_;
};

void check_shape(bool ok, const char* what);

/// c = a(m,k) * b(k,n)
Tensor matmul(const Tensor& a, const Tensor& b);
/// c = a(m,k) * b(n,k)^T
Tensor matmul_nt(const Tensor& a, const Tensor& b);

/// dst += a * b variants used by backward passes.
void matmul_acc(Tensor& dst, const Tensor& a, const Tensor& b);
void matmul_nt_acc(Tensor& dst, const Tensor& a, const Tensor& b);
void matmul_tn_acc(Tensor& dst, const Tensor& a, const Tensor& b);  // dst += a^T * b

void add_inplace(Tensor& dst, const Tensor& src);
void axpy(Tensor& dst, double alpha, const Tensor& src);  // dst += alpha * src

/// Named parameter with its gradient accumulator.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string name, Tensor value)
      : name(std::move(name)), value(std::move(value)),
        grad(this->value.rows(), this->value.cols()) {}

  void zero_grad() { grad.fill(0.0); }
};

/// Uniform fan-in init: entries in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
Tensor uniform_fanin(std::size_t rows, std::size_t cols, std::size_t fan_in, rng::Rng& rng);

}  // namespace stocksel::nn
