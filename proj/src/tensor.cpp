#include "tensor.hpp"

#include <cmath>

namespace stocksel::nn {

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), v_(std::move(values)) {
  check_shape(v_.size() == rows * cols, "tensor init size");
}

Tensor Tensor::full(std::size_t rows, std::size_t cols, double value) {
  Tensor t(rows, cols);
  t.fill(value);
  return t;
}

Tensor Tensor::row(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor(1, n, std::move(values));
}

void Tensor::fill(double value) {
  for (double& x : v_) x = value;
}

void Tensor::reshape(std::size_t rows, std::size_t cols) {
  check_shape(rows * cols == v_.size(), "reshape element count");
  rows_ = rows;
  cols_ = cols;
}

bool Tensor::all_finite() const {
  for (double x : v_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void check_shape(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::ShapeMismatch, what);
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  check_shape(a.cols() == b.rows(), "matmul inner dims");
  Tensor c(a.rows(), b.cols());
  matmul_acc(c, a, b);
  return c;
}

void matmul_acc(Tensor& dst, const Tensor& a, const Tensor& b) {
  check_shape(a.cols() == b.rows() && dst.rows() == a.rows() && dst.cols() == b.cols(),
              "matmul_acc dims");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = dst.data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = pa[i * k + p];
      if (av == 0.0) continue;
      const double* brow = pb + p * n;
      double* crow = pc + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  check_shape(a.cols() == b.cols(), "matmul_nt inner dims");
  Tensor c(a.rows(), b.rows());
  matmul_nt_acc(c, a, b);
  return c;
}

void matmul_nt_acc(Tensor& dst, const Tensor& a, const Tensor& b) {
  check_shape(a.cols() == b.cols() && dst.rows() == a.rows() && dst.cols() == b.rows(),
              "matmul_nt_acc dims");
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = dst.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = pa + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = pb + j * k;
      double sum = 0.0;
      for (std::size_t p = 0; p < k; ++p) sum += arow[p] * brow[p];
      pc[i * n + j] += sum;
    }
  }
}

void matmul_tn_acc(Tensor& dst, const Tensor& a, const Tensor& b) {
  check_shape(a.rows() == b.rows() && dst.rows() == a.cols() && dst.cols() == b.cols(),
              "matmul_tn_acc dims");
  const std::size_t k = a.rows(), m = a.cols(), n = b.cols();
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = dst.data();
  for (std::size_t p = 0; p < k; ++p) {
    const double* arow = pa + p * m;
    const double* brow = pb + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double av = arow[i];
      if (av == 0.0) continue;
      double* crow = pc + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void add_inplace(Tensor& dst, const Tensor& src) {
  check_shape(dst.same_shape(src), "add dims");
  double* pd = dst.data();
  const double* ps = src.data();
  for (std::size_t i = 0; i < dst.size(); ++i) pd[i] += ps[i];
}

void axpy(Tensor& dst, double alpha, const Tensor& src) {
  check_shape(dst.same_shape(src), "axpy dims");
  double* pd = dst.data();
  const double* ps = src.data();
  for (std::size_t i = 0; i < dst.size(); ++i) pd[i] += alpha * ps[i];
}

Tensor uniform_fanin(std::size_t rows, std::size_t cols, std::size_t fan_in, rng::Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  Tensor t(rows, cols);
  for (double& x : t.values()) x = rng.uniform(-bound, bound);
  return t;
}

}  // namespace stocksel::nn
