#pragma once

#include <cstddef>
#include <vector>

#include <volrank/tensor.hpp>

namespace volrank {

/// Thin SVD A = U diag(s) Vᵀ with p = min(rows, cols).
///
/// Columns are ordered by non-increasing singular value and each column of U
/// is sign-normalized so that its largest-magnitude entry (first one on ties)
/// is positive; the matching row of Vᵀ absorbs the flip.
struct SvdResult {
  Matrix u;                             ///< rows x p
  std::vector<double> singular_values;  ///< length p
  Matrix vt;                            ///< p x cols; empty from svd_left()
};

/// Householder-QR preconditioned one-sided Jacobi SVD.
///
/// Throws NumericError on non-finite input, or when the Jacobi sweeps do not
/// converge (the message carries the sweep count).
SvdResult svd(const Matrix& a);

/// Same factorization without forming Vᵀ. U and the singular values are
/// bit-identical to svd(a).
SvdResult svd_left(const Matrix& a);

/// C = A B
Matrix matmul(const Matrix& a, const Matrix& b);
/// C = Aᵀ B
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// Aᵀ A
Matrix gram(const Matrix& a);

/// max |(AᵀA - I)_ij|
double orthonormality_defect(const Matrix& a);

/// Solves S X = B for symmetric positive (semi)definite S by Cholesky. When
/// the factorization breaks down a ridge of 1e-12 * max(1, max diag) is added,
/// growing tenfold until it succeeds. Returns whether a ridge was needed.
bool solve_spd(const Matrix& s, Matrix& b_inout);

namespace detail {

/// C(m x n) += A(m x k) B(k x n); all column-major with explicit leading dims.
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc);

/// C(m x n) += Aᵀ B with A stored k x m.
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc);

}  // namespace detail

}  // namespace volrank
