#include <volrank/tensor.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include <volrank/error.hpp>
#include <volrank/kernels.hpp>
#include <volrank/linalg.hpp>

namespace volrank {
namespace {

void check_mode(int mode) {
  if (mode < 1 || mode > 3) {
    throw ArgumentError("mode must be 1, 2 or 3, got " + std::to_string(mode));
  }
}

std::string dims_str(const Dims& d) {
  return std::to_string(d.n1) + "x" + std::to_string(d.n2) + "x" + std::to_string(d.n3);
}

void check_positive(const Dims& d) {
  if (d.n1 == 0 || d.n2 == 0 || d.n3 == 0) {
    throw ShapeError("tensor extents must be positive, got " + dims_str(d));
  }
}

Dims with_extent(Dims d, int mode, std::size_t n) {
  if (mode == 1) d.n1 = n;
  if (mode == 2) d.n2 = n;
  if (mode == 3) d.n3 = n;
  return d;
}

// x ×_mode bᵀ where b is n_mode x p.
Tensor3 contract(const Tensor3& x, const Matrix& b, int mode) {
  check_mode(mode);
  const Dims& d = x.dims();
  if (b.rows() != d[mode]) {
    throw ShapeError("mode-" + std::to_string(mode) + " product: matrix has " +
                     std::to_string(b.rows()) + " inner columns, tensor extent is " +
                     std::to_string(d[mode]));
  }
  const std::size_t p = b.cols();
  Tensor3 y(with_extent(d, mode, p));
  const double* xs = x.data().data();
  double* ys = y.data().data();
  switch (mode) {
    case 1: {
      // Row-major x is a column-major (n2 n3) x n1 matrix.
      const std::size_t rest = d.n2 * d.n3;
      detail::gemm_nn(rest, p, d.n1, xs, rest, b.data().data(), b.rows(), ys, rest);
      break;
    }
    case 2: {
      // Each mode-1 slab is a column-major n3 x n2 matrix.
      for (std::size_t i = 0; i < d.n1; ++i) {
        detail::gemm_nn(d.n3, p, d.n2, xs + i * d.n2 * d.n3, d.n3, b.data().data(), b.rows(),
                        ys + i * p * d.n3, d.n3);
      }
      break;
    }
    default: {
      // Row-major x is a column-major n3 x (n1 n2) matrix.
      const std::size_t rest = d.n1 * d.n2;
      detail::gemm_tn(p, rest, d.n3, b.data().data(), b.rows(), xs, d.n3, ys, p);
      break;
    }
  }
  return y;
}

}  // namespace

std::size_t Dims::min() const noexcept { return std::min({n1, n2, n3}); }

std::size_t Dims::operator[](int mode) const {
  check_mode(mode);
  return mode == 1 ? n1 : mode == 2 ? n2 : n3;
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("matrix data length " + std::to_string(data_.size()) + " != " +
                     std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::leading_cols(std::size_t n) const {
  if (n > cols_) throw ShapeError("requested " + std::to_string(n) + " of " +
                                  std::to_string(cols_) + " columns");
  return Matrix(rows_, n, std::vector<double>(data_.begin(), data_.begin() + rows_ * n));
}

Tensor3::Tensor3(Dims dims) : dims_(dims) {
  check_positive(dims_);
  data_.assign(dims_.size(), 0.0);
}

Tensor3::Tensor3(Dims dims, std::vector<double> data) : dims_(dims), data_(std::move(data)) {
  check_positive(dims_);
  if (data_.size() != dims_.size()) {
    throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                     " does not match dims " + dims_str(dims_));
  }
}

Tensor3 Tensor3::leading_block(Dims sub) const {
  if (sub.n1 > dims_.n1 || sub.n2 > dims_.n2 || sub.n3 > dims_.n3) {
    throw ShapeError("block " + dims_str(sub) + " exceeds " + dims_str(dims_));
  }
  Tensor3 out(sub);
  for (std::size_t i = 0; i < sub.n1; ++i)
    for (std::size_t j = 0; j < sub.n2; ++j) {
      const double* src = data_.data() + offset(i, j, 0);
      std::copy(src, src + sub.n3, out.data().data() + out.offset(i, j, 0));
    }
  return out;
}

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw NumericError(std::string(what) + " has non-finite entry at linear index " +
                         std::to_string(i));
    }
  }
}

double inner_product(const Tensor3& a, const Tensor3& b) {
  if (a.dims() != b.dims()) {
    throw ShapeError("inner product of " + dims_str(a.dims()) + " and " + dims_str(b.dims()));
  }
  return kernels::dot(a.data().data(), b.data().data(), a.size());
}

double frobenius_norm(const Tensor3& a) { return std::sqrt(inner_product(a, a)); }

Tensor3 outer3(std::span<const double> u, std::span<const double> v, std::span<const double> w) {
  if (u.empty() || v.empty() || w.empty()) throw ShapeError("outer3 of an empty vector");
  Tensor3 t(Dims{u.size(), v.size(), w.size()});
  double* out = t.data().data();
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double uv = u[i] * v[j];
      double* fiber = out + t.offset(i, j, 0);
      for (std::size_t k = 0; k < w.size(); ++k) fiber[k] = uv * w[k];
    }
  return t;
}

Matrix unfold(const Tensor3& x, int mode) {
  check_mode(mode);
  const Dims& d = x.dims();
  Matrix m;
  switch (mode) {
    case 1:
      m = Matrix(d.n1, d.n2 * d.n3);
      for (std::size_t i = 0; i < d.n1; ++i)
        for (std::size_t j = 0; j < d.n2; ++j)
          for (std::size_t k = 0; k < d.n3; ++k) m(i, j + d.n2 * k) = x(i, j, k);
      break;
    case 2:
      m = Matrix(d.n2, d.n1 * d.n3);
      for (std::size_t i = 0; i < d.n1; ++i)
        for (std::size_t j = 0; j < d.n2; ++j)
          for (std::size_t k = 0; k < d.n3; ++k) m(j, i + d.n1 * k) = x(i, j, k);
      break;
    default:
      m = Matrix(d.n3, d.n1 * d.n2);
      for (std::size_t i = 0; i < d.n1; ++i)
        for (std::size_t j = 0; j < d.n2; ++j)
          for (std::size_t k = 0; k < d.n3; ++k) m(k, i + d.n1 * j) = x(i, j, k);
      break;
  }
  return m;
}

Tensor3 fold(const Matrix& m, int mode, Dims dims) {
  check_mode(mode);
  check_positive(dims);
  if (m.rows() != dims[mode] || m.rows() * m.cols() != dims.size()) {
    throw ShapeError("cannot fold " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     " along mode " + std::to_string(mode) + " into " + dims_str(dims));
  }
  Tensor3 x(dims);
  const Dims& d = dims;
  for (std::size_t i = 0; i < d.n1; ++i)
    for (std::size_t j = 0; j < d.n2; ++j)
      for (std::size_t k = 0; k < d.n3; ++k) {
        switch (mode) {
          case 1: x(i, j, k) = m(i, j + d.n2 * k); break;
          case 2: x(i, j, k) = m(j, i + d.n1 * k); break;
          default: x(i, j, k) = m(k, i + d.n1 * j); break;
        }
      }
  return x;
}

Tensor3 mode_product(const Tensor3& x, const Matrix& m, int mode) {
  check_mode(mode);
  if (m.cols() != x.dims()[mode]) {
    throw ShapeError("mode-" + std::to_string(mode) + " product: matrix has " +
                     std::to_string(m.cols()) + " columns, tensor extent is " +
                     std::to_string(x.dims()[mode]));
  }
  return contract(x, m.transposed(), mode);
}

Tensor3 mode_product_transposed(const Tensor3& x, const Matrix& m, int mode) {
  return contract(x, m, mode);
}

Tensor3 tucker_product(const Tensor3& core, const Matrix& u1, const Matrix& u2, const Matrix& u3) {
  Tensor3 t = mode_product(core, u3, 3);
  t = mode_product(t, u2, 2);
  return mode_product(t, u1, 1);
}

Tensor3 project(const Tensor3& x, const Matrix& u1, const Matrix& u2, const Matrix& u3) {
  Tensor3 t = mode_product_transposed(x, u1, 1);
  t = mode_product_transposed(t, u2, 2);
  return mode_product_transposed(t, u3, 3);
}

}  // namespace volrank
