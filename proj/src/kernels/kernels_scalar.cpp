#include "kernels_impl.hpp"

namespace volrank::kernels::scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sq_dist(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

Gram2 gram2(const double* x, const double* y, std::size_t n) {
  Gram2 g{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    g.xx += x[i] * x[i];
    g.yy += y[i] * y[i];
    g.xy += x[i] * y[i];
  }
  return g;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void rotate(double* x, double* y, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void hadamard(const double* x, const double* y, double* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

}  // namespace volrank::kernels::scalar
