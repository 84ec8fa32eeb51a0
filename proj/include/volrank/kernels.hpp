#pragma once

// Data-parallel inner loops used by the linear algebra layer.
//
// Every kernel has a portable scalar reference implementation and, where the
// build target allows it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The
// variant is picked once per process from CPU feature detection; setting
// VOLRANK_SIMD=scalar in the environment forces the reference kernels.
//
// SIMD variants reorder floating-point reductions, so results agree with the
// scalar reference to rounding, not bit-for-bit. Within one process the
// selected table is fixed, which keeps every higher-level routine
// deterministic.

#include <cstddef>
#include <string_view>

namespace volrank::kernels {

struct Gram2 {
  double xx;
  double yy;
  double xy;
};

struct KernelTable {
  std::string_view name;

  /// sum x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// sum (x[i] - y[i])^2
  double (*sq_dist)(const double* x, const double* y, std::size_t n);
  /// (|x|^2, |y|^2, x.y) in one pass
  Gram2 (*gram2)(const double* x, const double* y, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// x *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
  /// (x, y) <- (c*x - s*y, s*x + c*y)
  void (*rotate)(double* x, double* y, std::size_t n, double c, double s);
  /// z[i] = x[i] * y[i]
  void (*hadamard)(const double* x, const double* y, double* z, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// AVX2+FMA table, or nullptr when not compiled in or not supported by the CPU.
const KernelTable* avx2_table() noexcept;

/// NEON table, or nullptr when not compiled in.
const KernelTable* neon_table() noexcept;

/// The table selected for this process.
const KernelTable& active() noexcept;

inline double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}
inline double sq_dist(const double* x, const double* y, std::size_t n) {
  return active().sq_dist(x, y, n);
}
inline Gram2 gram2(const double* x, const double* y, std::size_t n) {
  return active().gram2(x, y, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}
inline void scale(double alpha, double* x, std::size_t n) { active().scale(alpha, x, n); }
inline void rotate(double* x, double* y, std::size_t n, double c, double s) {
  active().rotate(x, y, n, c, s);
}
inline void hadamard(const double* x, const double* y, double* z, std::size_t n) {
  active().hadamard(x, y, z, n);
}

}  // namespace volrank::kernels
