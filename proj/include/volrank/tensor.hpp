#pragma once

// Dense third-order tensors and column-major matrices.
//
// Index convention, used everywhere including the on-disk formats: entry
// (i, j, k) of an n1 x n2 x n3 tensor lives at offset (i * n2 + j) * n3 + k,
// i.e. mode 3 varies fastest. Mode-m unfoldings follow the Kolda-Bader column
// order: the lower-numbered remaining mode varies fastest.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace volrank {

struct Dims {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t n3 = 0;

  std::size_t size() const noexcept { return n1 * n2 * n3; }
  std::size_t min() const noexcept;
  /// Extent along mode 1, 2 or 3.
  std::size_t operator[](int mode) const;
  std::array<std::size_t, 3> as_array() const noexcept { return {n1, n2, n3}; }

  friend bool operator==(const Dims&, const Dims&) = default;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const noexcept {
    return {data_.data() + j * rows_, rows_};
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transposed() const;
  /// First `n` columns.
  Matrix leading_cols(std::size_t n) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

class Tensor3 {
 public:
  Tensor3() = default;
  /// Zero tensor. Every extent must be positive.
  explicit Tensor3(Dims dims);
  Tensor3(Dims dims, std::vector<double> data);

  const Dims& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::size_t offset(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return (i * dims_.n2 + j) * dims_.n3 + k;
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept {
    return data_[offset(i, j, k)];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return data_[offset(i, j, k)];
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  /// Leading n1' x n2' x n3' block.
  Tensor3 leading_block(Dims sub) const;

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  Dims dims_;
  std::vector<double> data_;
};

/// Throws NumericError naming the first non-finite entry.
void require_finite(std::span<const double> values, const char* what);

double inner_product(const Tensor3& a, const Tensor3& b);
double frobenius_norm(const Tensor3& a);

/// Rank-one tensor u o v o w.
Tensor3 outer3(std::span<const double> u, std::span<const double> v, std::span<const double> w);

Matrix unfold(const Tensor3& x, int mode);
Tensor3 fold(const Matrix& m, int mode, Dims dims);

/// x ×_mode m: replaces extent n_mode with m.rows().
Tensor3 mode_product(const Tensor3& x, const Matrix& m, int mode);

/// x ×_mode mᵀ without materializing the transpose: replaces n_mode with m.cols().
Tensor3 mode_product_transposed(const Tensor3& x, const Matrix& m, int mode);

/// core ×1 u1 ×2 u2 ×3 u3
Tensor3 tucker_product(const Tensor3& core, const Matrix& u1, const Matrix& u2, const Matrix& u3);

/// x ×1 u1ᵀ ×2 u2ᵀ ×3 u3ᵀ
Tensor3 project(const Tensor3& x, const Matrix& u1, const Matrix& u2, const Matrix& u3);

}  // namespace volrank
