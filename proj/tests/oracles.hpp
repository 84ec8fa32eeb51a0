#pragma once

// Independent reference implementations for tests. Everything here is
// written as plain index loops over the documented layout, without touching
// the library's kernels, GEMM or SVD paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <volrank/random.hpp>
#include <volrank/tensor.hpp>

namespace oracle {

using volrank::Dims;
using volrank::Matrix;
using volrank::Tensor3;

inline Tensor3 random_tensor(volrank::Rng& rng, Dims d, double lo = -1.0, double hi = 1.0) {
  Tensor3 t(d);
  for (double& v : t.data()) v = rng.uniform(lo, hi);
  return t;
}

inline Matrix random_matrix(volrank::Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform(-1.0, 1.0);
  return m;
}

inline std::vector<double> random_vector(volrank::Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

inline Dims random_dims(volrank::Rng& rng, std::size_t max1, std::size_t max2, std::size_t max3) {
  auto pick = [&](std::size_t mx) {
    return 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(mx));
  };
  return Dims{pick(max1), pick(max2), pick(max3)};
}

inline double inner(const Tensor3& a, const Tensor3& b) {
  const Dims& d = a.dims();
  double s = 0.0;
  for (std::size_t i = 0; i < d.n1; ++i)
    for (std::size_t j = 0; j < d.n2; ++j)
      for (std::size_t k = 0; k < d.n3; ++k) s += a(i, j, k) * b(i, j, k);
  return s;
}

inline double mse(const Tensor3& a, const Tensor3& b) {
  const Dims& d = a.dims();
  double s = 0.0;
  for (std::size_t i = 0; i < d.n1; ++i)
    for (std::size_t j = 0; j < d.n2; ++j)
      for (std::size_t k = 0; k < d.n3; ++k) {
        const double e = a(i, j, k) - b(i, j, k);
        s += e * e;
      }
  return s / static_cast<double>(d.size());
}

inline Tensor3 outer(const std::vector<double>& u, const std::vector<double>& v,
                     const std::vector<double>& w) {
  Tensor3 t(Dims{u.size(), v.size(), w.size()});
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      for (std::size_t k = 0; k < w.size(); ++k) t(i, j, k) = u[i] * v[j] * w[k];
  return t;
}

/// y(.., p, ..) = sum_q m(p, q) x(.., q, ..) along `mode`.
inline Tensor3 mode_product(const Tensor3& x, const Matrix& m, int mode) {
  Dims d = x.dims();
  Dims out = d;
  if (mode == 1) out.n1 = m.rows();
  if (mode == 2) out.n2 = m.rows();
  if (mode == 3) out.n3 = m.rows();
  Tensor3 y(out);
  for (std::size_t i = 0; i < out.n1; ++i)
    for (std::size_t j = 0; j < out.n2; ++j)
      for (std::size_t k = 0; k < out.n3; ++k) {
        double s = 0.0;
        const std::size_t inner_n = mode == 1 ? d.n1 : mode == 2 ? d.n2 : d.n3;
        for (std::size_t q = 0; q < inner_n; ++q) {
          if (mode == 1) s += m(i, q) * x(q, j, k);
          if (mode == 2) s += m(j, q) * x(i, q, k);
          if (mode == 3) s += m(k, q) * x(i, j, q);
        }
        y(i, j, k) = s;
      }
  return y;
}

/// sum_{abc} core(a,b,c) u1(:,a) o u2(:,b) o u3(:,c)
inline Tensor3 tucker_expand(const Tensor3& core, const Matrix& u1, const Matrix& u2,
                             const Matrix& u3) {
  Tensor3 y(Dims{u1.rows(), u2.rows(), u3.rows()});
  const Dims& c = core.dims();
  for (std::size_t i = 0; i < u1.rows(); ++i)
    for (std::size_t j = 0; j < u2.rows(); ++j)
      for (std::size_t k = 0; k < u3.rows(); ++k) {
        double s = 0.0;
        for (std::size_t a = 0; a < c.n1; ++a)
          for (std::size_t b = 0; b < c.n2; ++b)
            for (std::size_t g = 0; g < c.n3; ++g) s += core(a, b, g) * u1(i, a) * u2(j, b) * u3(k, g);
        y(i, j, k) = s;
      }
  return y;
}

/// sum_r w_r a(:,r) o b(:,r) o c(:,r)
inline Tensor3 cp_expand(const std::vector<double>& w, const Matrix& a, const Matrix& b,
                         const Matrix& c) {
  Tensor3 y(Dims{a.rows(), b.rows(), c.rows()});
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j)
      for (std::size_t k = 0; k < c.rows(); ++k) {
        double s = 0.0;
        for (std::size_t r = 0; r < w.size(); ++r) s += w[r] * a(i, r) * b(j, r) * c(k, r);
        y(i, j, k) = s;
      }
  return y;
}

/// Singular values via cyclic two-sided Jacobi eigen-iteration on the
/// smaller Gram matrix (no bidiagonalization, no QR). Non-increasing order.
inline std::vector<double> jacobi_singular_values(const Matrix& a) {
  const bool use_rows = a.rows() <= a.cols();
  const std::size_t n = use_rows ? a.rows() : a.cols();
  std::vector<double> g(n * n, 0.0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      double s = 0.0;
      if (use_rows) {
        for (std::size_t c = 0; c < a.cols(); ++c) s += a(p, c) * a(q, c);
      } else {
        for (std::size_t r = 0; r < a.rows(); ++r) s += a(r, p) * a(r, q);
      }
      g[p * n + q] = s;
    }
  auto at = [&](std::size_t p, std::size_t q) -> double& { return g[p * n + q]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (off < 1e-300) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (at(p, q) == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double gkp = at(k, p);
          const double gkq = at(k, q);
          at(k, p) = c * gkp - s * gkq;
          at(k, q) = s * gkp + c * gkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double gpk = at(p, k);
          const double gqk = at(q, k);
          at(p, k) = c * gpk - s * gqk;
          at(q, k) = s * gpk + c * gqk;
        }
      }
  }
  std::vector<double> sv(n);
  for (std::size_t p = 0; p < n; ++p) sv[p] = std::sqrt(std::max(0.0, at(p, p)));
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

inline double max_abs_diff(const Tensor3& a, const Tensor3& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline bool all_zero(const Tensor3& a) {
  return std::all_of(a.data().begin(), a.data().end(), [](double v) { return v == 0.0; });
}

inline double max_abs(const Tensor3& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

/// max |a - b| / max(|b|, tiny)
inline double rel_max_diff(const Tensor3& a, const Tensor3& b) {
  const double scale = std::max(max_abs(b), 1e-300);
  return max_abs_diff(a, b) / scale;
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// Random exact multilinear-rank-(rho, rho, rho) tensor, built independently
/// of the library's generator: Householder-free Gram-Schmidt bases.
inline Tensor3 exact_multirank(volrank::Rng& rng, Dims d, std::size_t rho,
                               Tensor3* core_out = nullptr) {
  auto basis = [&](std::size_t n) {
    Matrix q = random_matrix(rng, n, rho);
    for (std::size_t c = 0; c < rho; ++c) {
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t p = 0; p < c; ++p) {
          double dp = 0.0;
          for (std::size_t i = 0; i < n; ++i) dp += q(i, p) * q(i, c);
          for (std::size_t i = 0; i < n; ++i) q(i, c) -= dp * q(i, p);
        }
      double nn = 0.0;
      for (std::size_t i = 0; i < n; ++i) nn += q(i, c) * q(i, c);
      nn = std::sqrt(nn);
      for (std::size_t i = 0; i < n; ++i) q(i, c) /= nn;
    }
    return q;
  };
  const Matrix q1 = basis(d.n1), q2 = basis(d.n2), q3 = basis(d.n3);
  Tensor3 core = random_tensor(rng, Dims{rho, rho, rho});
  if (core_out) *core_out = core;
  return tucker_expand(core, q1, q2, q3);
}

}  // namespace oracle
