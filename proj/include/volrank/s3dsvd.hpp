#pragma once

// Structured 3D-SVD: per-mode truncated SVD bases, the reduced core they
// induce, and the quasi-singular coefficients read off the core diagonal.
//
// One model computed at maximum rank r yields every truncation level k <= r:
// reconstruct(model, k) uses the leading k x k x k sub-core and the leading k
// columns of each factor, so no refit is needed.

#include <array>
#include <cstddef>
#include <vector>

#include <volrank/linalg.hpp>
#include <volrank/tensor.hpp>

namespace volrank {

struct S3dModel {
  Dims dims;
  std::size_t r = 0;
  std::array<Matrix, 3> factors;  ///< U1 (n1 x r), U2 (n2 x r), U3 (n3 x r)
  Tensor3 core;                   ///< r x r x r
  /// core(i, i, i), signed, in index order. Not sorted: position i stays
  /// aligned with factor column i.
  std::vector<double> qsigma;

  friend bool operator==(const S3dModel&, const S3dModel&) = default;
};

/// Diagonal coefficient array: zero everywhere except S(i,i,i) = qsigma[i].
struct CoeffArray {
  std::size_t r = 0;
  Tensor3 s;
};

struct OrderingEntry {
  std::size_t index;
  double magnitude;     ///< |qsigma[index]|
  bool violation;       ///< |qsigma[index]| < |qsigma[index + 1]|
};

/// Throws ArgumentError if r == 0 or r > min(dims); NumericError on
/// non-finite input or SVD failure.
S3dModel decompose(const Tensor3& x, std::size_t r);

/// Same as decompose() but also returns the full singular-value spectrum of
/// each mode unfolding (used for the multilinear truncation bound).
S3dModel decompose(const Tensor3& x, std::size_t r,
                   std::array<std::vector<double>, 3>* unfolding_spectra);

/// Builds a model from given orthonormal factors (columns >= r are dropped)
/// by contracting x against them.
S3dModel model_from_factors(const Tensor3& x, std::array<Matrix, 3> factors, std::size_t r);

/// Truncated-core reconstruction at level k, 1 <= k <= model.r.
Tensor3 reconstruct(const S3dModel& model, std::size_t k);

/// Sum over i < k of qsigma[i] * u_i o v_i o w_i.
Tensor3 diagonal_expansion(const S3dModel& model, std::size_t k);

/// sqrt(max(0, 1 - sum_{i<k} qsigma_i^2 / |x|_F^2)). Throws
/// DegenerateInputError when |x|_F == 0.
double epsilon_r(const S3dModel& model, const Tensor3& x, std::size_t k);

CoeffArray coeff_array(const S3dModel& model);

std::vector<OrderingEntry> ordering_report(const S3dModel& model);

/// Model truncated to its leading k components (what a prefix read yields).
S3dModel truncate(const S3dModel& model, std::size_t k);

}  // namespace volrank
