#pragma once

// Per-ISA kernel entry points. Each namespace is implemented in its own
// translation unit so that only that file is compiled with ISA flags.

#include <volrank/kernels.hpp>

#define VOLRANK_DECLARE_KERNELS(ns)                                                 \
  namespace volrank::kernels::ns {                                                  \
  double dot(const double* x, const double* y, std::size_t n);                      \
  double sq_dist(const double* x, const double* y, std::size_t n);                  \
  Gram2 gram2(const double* x, const double* y, std::size_t n);                     \
  void axpy(double alpha, const double* x, double* y, std::size_t n);               \
  void scale(double alpha, double* x, std::size_t n);                               \
  void rotate(double* x, double* y, std::size_t n, double c, double s);             \
  void hadamard(const double* x, const double* y, double* z, std::size_t n);        \
  }

VOLRANK_DECLARE_KERNELS(scalar)

#if defined(VOLRANK_HAVE_AVX2)
VOLRANK_DECLARE_KERNELS(avx2)
#endif

#if defined(VOLRANK_HAVE_NEON)
VOLRANK_DECLARE_KERNELS(neon)
#endif
