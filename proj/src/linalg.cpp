#include <volrank/linalg.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <volrank/error.hpp>
#include <volrank/kernels.hpp>

namespace volrank {
namespace detail {

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  // Row blocks keep the active slice of A resident in cache across columns.
  constexpr std::size_t kRowBlock = 512;
  for (std::size_t i0 = 0; i0 < m; i0 += kRowBlock) {
    const std::size_t len = std::min(kRowBlock, m - i0);
    for (std::size_t j = 0; j < n; ++j) {
      double* cj = c + j * ldc + i0;
      const double* bj = b + j * ldb;
      for (std::size_t p = 0; p < k; ++p) {
        kernels::axpy(bj[p], a + p * lda + i0, cj, len);
      }
    }
  }
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  for (std::size_t j = 0; j < n; ++j) {
    const double* bj = b + j * ldb;
    double* cj = c + j * ldc;
    for (std::size_t i = 0; i < m; ++i) cj[i] += kernels::dot(a + i * lda, bj, k);
  }
}

}  // namespace detail

namespace {

constexpr int kMaxSweeps = 80;

struct Householder {
  Matrix r;                          // p x p upper triangular
  std::vector<std::vector<double>> vs;  // reflector j acts on rows j..n-1
  std::vector<double> betas;         // 2 / (vᵀv), zero for identity reflectors
};

// In-place Householder QR of a tall n x p matrix.
Householder householder_qr(Matrix a) {
  const std::size_t n = a.rows();
  const std::size_t p = a.cols();
  Householder h;
  h.vs.resize(p);
  h.betas.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double* colj = a.col(j).data() + j;
    const std::size_t len = n - j;
    const double norm = std::sqrt(kernels::dot(colj, colj, len));
    std::vector<double> v(colj, colj + len);
    if (norm == 0.0) {
      h.vs[j] = std::move(v);
      continue;
    }
    const double alpha = colj[0] > 0.0 ? -norm : norm;
    v[0] -= alpha;
    const double vtv = kernels::dot(v.data(), v.data(), len);
    if (vtv == 0.0) {
      h.vs[j] = std::move(v);
      continue;
    }
    const double beta = 2.0 / vtv;
    colj[0] = alpha;
    std::fill(colj + 1, colj + len, 0.0);
    for (std::size_t c = j + 1; c < p; ++c) {
      double* colc = a.col(c).data() + j;
      const double f = beta * kernels::dot(v.data(), colc, len);
      kernels::axpy(-f, v.data(), colc, len);
    }
    h.vs[j] = std::move(v);
    h.betas[j] = beta;
  }
  h.r = Matrix(p, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i <= j; ++i) h.r(i, j) = a(i, j);
  return h;
}

// Q · m for the n x p thin factor Q, with m p x q.
Matrix apply_q(const Householder& h, std::size_t n, const Matrix& m) {
  const std::size_t p = h.vs.size();
  Matrix out(n, m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c)
    std::copy(m.col(c).begin(), m.col(c).end(), out.col(c).begin());
  for (std::size_t jj = p; jj-- > 0;) {
    if (h.betas[jj] == 0.0) continue;
    const std::vector<double>& v = h.vs[jj];
    const std::size_t len = n - jj;
    for (std::size_t c = 0; c < out.cols(); ++c) {
      double* colc = out.col(c).data() + jj;
      const double f = h.betas[jj] * kernels::dot(v.data(), colc, len);
      kernels::axpy(-f, v.data(), colc, len);
    }
  }
  return out;
}

// One-sided Jacobi: rotates columns of w until mutually orthogonal,
// accumulating the rotations into j (which starts as the identity).
void jacobi_orthogonalize(Matrix& w, Matrix& j) {
  const std::size_t p = w.cols();
  const std::size_t n = w.rows();
  const double tol = std::max(1.0, std::sqrt(static_cast<double>(n))) *
                     std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t a = 0; a + 1 < p; ++a) {
      for (std::size_t b = a + 1; b < p; ++b) {
        double* wa = w.col(a).data();
        double* wb = w.col(b).data();
        const kernels::Gram2 g = kernels::gram2(wa, wb, n);
        if (g.xx == 0.0 || g.yy == 0.0) continue;
        if (std::abs(g.xy) <= tol * std::sqrt(g.xx) * std::sqrt(g.yy)) continue;
        const double zeta = (g.yy - g.xx) / (2.0 * g.xy);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        kernels::rotate(wa, wb, n, c, s);
        kernels::rotate(j.col(a).data(), j.col(b).data(), j.rows(), c, s);
        rotated = true;
      }
    }
    if (!rotated) return;
  }
  throw NumericError("one-sided Jacobi SVD did not converge after " +
                     std::to_string(kMaxSweeps) + " sweeps");
}

// Columns of w normalized; zero columns are replaced by unit vectors
// orthogonal to everything already present (classical Gram-Schmidt, twice).
Matrix normalized_columns(const Matrix& w, const std::vector<double>& norms) {
  const std::size_t n = w.rows();
  const std::size_t p = w.cols();
  Matrix q(n, p);
  std::vector<bool> filled(p, false);
  for (std::size_t c = 0; c < p; ++c) {
    if (norms[c] > 0.0) {
      std::copy(w.col(c).begin(), w.col(c).end(), q.col(c).begin());
      kernels::scale(1.0 / norms[c], q.col(c).data(), n);
      filled[c] = true;
    }
  }
  std::size_t candidate = 0;
  for (std::size_t c = 0; c < p; ++c) {
    if (filled[c]) continue;
    for (; candidate < n; ++candidate) {
      std::vector<double> e(n, 0.0);
      e[candidate] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t o = 0; o < p; ++o) {
          if (!filled[o]) continue;
          const double f = kernels::dot(q.col(o).data(), e.data(), n);
          kernels::axpy(-f, q.col(o).data(), e.data(), n);
        }
      }
      const double norm = std::sqrt(kernels::dot(e.data(), e.data(), n));
      if (norm > 0.5) {
        kernels::scale(1.0 / norm, e.data(), n);
        std::copy(e.begin(), e.end(), q.col(c).begin());
        filled[c] = true;
        ++candidate;
        break;
      }
    }
  }
  return q;
}

SvdResult svd_impl(const Matrix& a_in, bool want_vt) {
  require_finite(a_in.data(), "svd input");
  const std::size_t rows = a_in.rows();
  const std::size_t cols = a_in.cols();
  if (rows == 0 || cols == 0) throw ShapeError("svd of an empty matrix");
  const bool wide = rows <= cols;
  const std::size_t p = std::min(rows, cols);

  // Unit max-abs scaling keeps squared column norms away from under/overflow.
  double amax = 0.0;
  for (double v : a_in.data()) amax = std::max(amax, std::abs(v));
  const double inv = amax > 0.0 ? 1.0 / amax : 1.0;

  Matrix tall = wide ? a_in.transposed() : a_in;
  kernels::scale(inv, tall.data().data(), tall.data().size());
  const std::size_t n = tall.rows();

  const Householder h = householder_qr(std::move(tall));

  // wide:  Aᵀ = Q R,  R J = W      =>  A = J Σ (Q U_W)ᵀ
  // tall:  A  = Q R,  Rᵀ J = W     =>  A = (Q J) Σ U_Wᵀ
  Matrix w = wide ? h.r : h.r.transposed();
  Matrix j = Matrix::identity(p);
  jacobi_orthogonalize(w, j);

  std::vector<double> norms(p);
  for (std::size_t c = 0; c < p; ++c) {
    const double nn = std::sqrt(kernels::dot(w.col(c).data(), w.col(c).data(), p));
    norms[c] = nn < 1e-150 ? 0.0 : nn;
  }

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  Matrix u_raw = wide ? j : apply_q(h, n, j);
  Matrix v_raw;
  if (want_vt || !wide) {
    Matrix uw = normalized_columns(w, norms);
    v_raw = wide ? apply_q(h, n, uw) : uw;
  }

  SvdResult out;
  out.u = Matrix(rows, p);
  out.singular_values.resize(p);
  if (want_vt) out.vt = Matrix(p, cols);
  for (std::size_t c = 0; c < p; ++c) {
    const std::size_t src = order[c];
    out.singular_values[c] = norms[src] * amax;
    auto uc = u_raw.col(src);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < rows; ++i)
      if (std::abs(uc[i]) > std::abs(uc[arg])) arg = i;
    const double sign = uc[arg] < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < rows; ++i) out.u(i, c) = sign * uc[i];
    if (want_vt) {
      auto vc = v_raw.col(src);
      for (std::size_t i = 0; i < cols; ++i) out.vt(c, i) = sign * vc[i];
    }
  }
  return out;
}

}  // namespace

SvdResult svd(const Matrix& a) { return svd_impl(a, true); }

SvdResult svd_left(const Matrix& a) { return svd_impl(a, false); }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul inner dimensions " + std::to_string(a.cols()) + " and " +
                     std::to_string(b.rows()));
  }
  Matrix c(a.rows(), b.cols());
  detail::gemm_nn(a.rows(), b.cols(), a.cols(), a.data().data(), a.rows(), b.data().data(),
                  b.rows(), c.data().data(), c.rows());
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw ShapeError("matmul_tn inner dimensions " + std::to_string(a.rows()) + " and " +
                     std::to_string(b.rows()));
  }
  Matrix c(a.cols(), b.cols());
  detail::gemm_tn(a.cols(), b.cols(), a.rows(), a.data().data(), a.rows(), b.data().data(),
                  b.rows(), c.data().data(), c.rows());
  return c;
}

Matrix gram(const Matrix& a) { return matmul_tn(a, a); }

double orthonormality_defect(const Matrix& a) {
  const Matrix g = gram(a);
  double worst = 0.0;
  for (std::size_t j = 0; j < g.cols(); ++j)
    for (std::size_t i = 0; i < g.rows(); ++i)
      worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

bool solve_spd(const Matrix& s, Matrix& b) {
  const std::size_t n = s.rows();
  if (s.cols() != n || b.rows() != n) throw ShapeError("solve_spd shape mismatch");
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, s(i, i));
  const double base_ridge = 1e-12 * std::max(1.0, max_diag);

  for (int attempt = 0; attempt < 12; ++attempt) {
    const double ridge = attempt == 0 ? 0.0 : base_ridge * std::pow(10.0, attempt - 1);
    Matrix l = s;
    for (std::size_t i = 0; i < n; ++i) l(i, i) += ridge;
    bool ok = true;
    for (std::size_t c = 0; c < n && ok; ++c) {
      double d = l(c, c);
      for (std::size_t k = 0; k < c; ++k) d -= l(c, k) * l(c, k);
      if (!(d > std::numeric_limits<double>::epsilon() * std::max(max_diag, 1e-300) * n)) {
        ok = false;
        break;
      }
      const double lc = std::sqrt(d);
      l(c, c) = lc;
      for (std::size_t r = c + 1; r < n; ++r) {
        double v = l(r, c);
        for (std::size_t k = 0; k < c; ++k) v -= l(r, k) * l(c, k);
        l(r, c) = v / lc;
      }
    }
    if (!ok) continue;
    for (std::size_t col = 0; col < b.cols(); ++col) {
      auto x = b.col(col);
      for (std::size_t i = 0; i < n; ++i) {
        double v = x[i];
        for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * x[k];
        x[i] = v / l(i, i);
      }
      for (std::size_t i = n; i-- > 0;) {
        double v = x[i];
        for (std::size_t k = i + 1; k < n; ++k) v -= l(k, i) * x[k];
        x[i] = v / l(i, i);
      }
    }
    return attempt > 0;
  }
  throw NumericError("normal equations remain singular after ridge regularization");
}

}  // namespace volrank
