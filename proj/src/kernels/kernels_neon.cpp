#include <arm_neon.h>

#include "kernels_impl.hpp"

namespace volrank::kernels::neon {

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t a0 = vdupq_n_f64(0.0);
  float64x2_t a1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 = vfmaq_f64(a0, vld1q_f64(x + i), vld1q_f64(y + i));
    a1 = vfmaq_f64(a1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(a0, a1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sq_dist(const double* x, const double* y, std::size_t n) {
  float64x2_t a0 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    a0 = vfmaq_f64(a0, d, d);
  }
  double s = vaddvq_f64(a0);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

Gram2 gram2(const double* x, const double* y, std::size_t n) {
  float64x2_t xx = vdupq_n_f64(0.0);
  float64x2_t yy = vdupq_n_f64(0.0);
  float64x2_t xy = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vx = vld1q_f64(x + i);
    const float64x2_t vy = vld1q_f64(y + i);
    xx = vfmaq_f64(xx, vx, vx);
    yy = vfmaq_f64(yy, vy, vy);
    xy = vfmaq_f64(xy, vx, vy);
  }
  Gram2 g{vaddvq_f64(xx), vaddvq_f64(yy), vaddvq_f64(xy)};
  for (; i < n; ++i) {
    g.xx += x[i] * x[i];
    g.yy += y[i] * y[i];
    g.xy += x[i] * y[i];
  }
  return g;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_n_f64(vld1q_f64(x + i), alpha));
  for (; i < n; ++i) x[i] *= alpha;
}

void rotate(double* x, double* y, std::size_t n, double c, double s) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vx = vld1q_f64(x + i);
    const float64x2_t vy = vld1q_f64(y + i);
    vst1q_f64(x + i, vfmsq_n_f64(vmulq_n_f64(vx, c), vy, s));
    vst1q_f64(y + i, vfmaq_n_f64(vmulq_n_f64(vy, c), vx, s));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void hadamard(const double* x, const double* y, double* z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(z + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

}  // namespace volrank::kernels::neon
