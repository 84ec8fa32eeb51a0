#include <volrank/baselines.hpp>

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include <volrank/error.hpp>
#include <volrank/kernels.hpp>
#include <volrank/linalg.hpp>
#include <volrank/parallel.hpp>
#include <volrank/random.hpp>

namespace volrank {
namespace {

Matrix random_factor(Rng& rng, std::size_t rows, std::size_t k) {
  Matrix m(rows, k);
  for (double& v : m.data()) v = rng.uniform();
  return m;
}

// Unit-normalizes each column, returning the norms. A zero column becomes
// e_0 with weight 0 so the unit-norm invariant holds.
std::vector<double> normalize_columns(Matrix& f) {
  std::vector<double> norms(f.cols());
  for (std::size_t c = 0; c < f.cols(); ++c) {
    double* col = f.col(c).data();
    const double n = std::sqrt(kernels::dot(col, col, f.rows()));
    norms[c] = n;
    if (n > 0.0) {
      kernels::scale(1.0 / n, col, f.rows());
    } else {
      std::fill(col, col + f.rows(), 0.0);
      col[0] = 1.0;
    }
  }
  return norms;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  Matrix h(a.rows(), a.cols());
  kernels::hadamard(a.data().data(), b.data().data(), h.data().data(), a.data().size());
  return h;
}

// Solves f · v = mttkrp for f (v symmetric), i.e. v fᵀ = mttkrpᵀ.
Matrix solve_factor(const Matrix& v, const Matrix& mttkrp, bool& regularized) {
  Matrix rhs = mttkrp.transposed();
  regularized |= solve_spd(v, rhs);
  return rhs.transposed();
}

}  // namespace

CpModel cpd_decompose(const Tensor3& x, std::size_t k, std::uint64_t seed, CpOptions opts) {
  if (k < 1) throw ArgumentError("CPD rank must be at least 1");
  require_finite(x.data(), "input tensor");
  const Dims& d = x.dims();
  const std::size_t n12 = d.n1 * d.n2;

  Rng rng(seed);
  CpModel m;
  m.rank = k;
  m.seed = seed;
  Matrix& a = m.factors[0];
  Matrix& b = m.factors[1];
  Matrix& c = m.factors[2];
  a = random_factor(rng, d.n1, k);
  b = random_factor(rng, d.n2, k);
  c = random_factor(rng, d.n3, k);
  m.weights.assign(k, 1.0);

  const double norm2 = inner_product(x, x);
  const double* xs = x.data().data();
  double prev_err = std::numeric_limits<double>::infinity();

  // y(r, i n2 + j) = sum_l x(i, j, l) c(l, r); shared by the mode-1 and
  // mode-2 updates because c is fixed until mode 3.
  Matrix y(k, n12);
  Matrix kr(n12, k);

  for (std::size_t iter = 1; iter <= opts.max_iters; ++iter) {
    std::fill(y.data().begin(), y.data().end(), 0.0);
    detail::gemm_tn(k, n12, d.n3, c.data().data(), d.n3, xs, d.n3, y.data().data(), k);
    const Matrix ctc = gram(c);

    Matrix m1(d.n1, k);
    for (std::size_t i = 0; i < d.n1; ++i)
      for (std::size_t j = 0; j < d.n2; ++j) {
        const double* yij = y.data().data() + (i * d.n2 + j) * k;
        for (std::size_t r = 0; r < k; ++r) m1(i, r) += yij[r] * b(j, r);
      }
    a = solve_factor(hadamard(gram(b), ctc), m1, m.regularized);
    normalize_columns(a);

    Matrix m2(d.n2, k);
    for (std::size_t i = 0; i < d.n1; ++i)
      for (std::size_t j = 0; j < d.n2; ++j) {
        const double* yij = y.data().data() + (i * d.n2 + j) * k;
        for (std::size_t r = 0; r < k; ++r) m2(j, r) += yij[r] * a(i, r);
      }
    const Matrix ata = gram(a);
    b = solve_factor(hadamard(ata, ctc), m2, m.regularized);
    normalize_columns(b);

    const Matrix btb = gram(b);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t i = 0; i < d.n1; ++i)
        for (std::size_t j = 0; j < d.n2; ++j) kr(i * d.n2 + j, r) = a(i, r) * b(j, r);
    Matrix m3(d.n3, k);
    detail::gemm_nn(d.n3, k, n12, xs, d.n3, kr.data().data(), n12, m3.data().data(), d.n3);
    const Matrix abg = hadamard(ata, btb);
    c = solve_factor(abg, m3, m.regularized);

    // |x - xhat|^2 = |x|^2 - 2 <x, xhat> + |xhat|^2 with the weights still in c.
    const double inner = kernels::dot(m3.data().data(), c.data().data(), m3.data().size());
    const Matrix full = hadamard(abg, gram(c));
    double xhat2 = 0.0;
    for (double v : full.data()) xhat2 += v;
    m.weights = normalize_columns(c);

    const double resid2 = std::max(0.0, norm2 - 2.0 * inner + xhat2);
    const double err = norm2 > 0.0 ? std::sqrt(resid2 / norm2) : 0.0;
    m.iterations_run = iter;
    if (std::abs(err - prev_err) < opts.tol) {
      m.converged = true;
      break;
    }
    prev_err = err;
  }
  return m;
}

Tensor3 cpd_reconstruct(const CpModel& model) {
  const Matrix& a = model.factors[0];
  const Matrix& b = model.factors[1];
  const Matrix& c = model.factors[2];
  const Dims d{a.rows(), b.rows(), c.rows()};
  Tensor3 out(d);
  double* o = out.data().data();
  for (std::size_t r = 0; r < model.rank; ++r) {
    if (model.weights[r] == 0.0) continue;
    const double* cr = c.col(r).data();
    for (std::size_t i = 0; i < d.n1; ++i)
      for (std::size_t j = 0; j < d.n2; ++j) {
        kernels::axpy(model.weights[r] * a(i, r) * b(j, r), cr, o + out.offset(i, j, 0), d.n3);
      }
  }
  return out;
}

double student_t_975(std::size_t dof) {
  if (dof == 0) return std::numeric_limits<double>::quiet_NaN();
  const boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 0.975);
}

Summary summarize(std::span<const double> samples) {
  Summary s;
  const std::size_t n = samples.size();
  if (n == 0) {
    s.mean = s.ci_half_width = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  // Shifted by the first sample so identical samples give exactly that value
  // and zero spread.
  const double x0 = samples[0];
  double shift = 0.0;
  for (double v : samples) shift += v - x0;
  s.mean = x0 + shift / static_cast<double>(n);
  if (n < 2) {
    s.ci_half_width = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double ss = 0.0;
  for (double v : samples) ss += (v - s.mean) * (v - s.mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  s.ci_half_width = student_t_975(n - 1) * sd / std::sqrt(static_cast<double>(n));
  return s;
}

CpStudy cpd_study(const Tensor3& x, std::size_t k, std::span<const std::uint64_t> seeds,
                  std::size_t threads, CpOptions opts) {
  if (seeds.empty()) throw ArgumentError("cpd_study needs at least one seed");
  CpStudy study;
  study.k = k;
  study.runs.resize(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t i) {
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const CpModel model = cpd_decompose(x, k, seeds[i], opts);
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      CpRun& run = study.runs[i];
      run.seed = seeds[i];
      run.report = evaluate(Method::cpd, k, x, cpd_reconstruct(model), elapsed);
      run.iterations_run = model.iterations_run;
      run.converged = model.converged;
    } catch (const Error& e) {
      throw NumericError("cpd run with seed " + std::to_string(seeds[i]) + " failed: " +
                         e.what());
    }
  });

  std::vector<double> psnr, mse_v, rel, time;
  for (const CpRun& run : study.runs) {
    psnr.push_back(run.report.psnr_db);
    mse_v.push_back(run.report.mse);
    rel.push_back(run.report.rel_err);
    time.push_back(run.report.elapsed_seconds);
  }
  study.psnr_db = summarize(psnr);
  study.mse = summarize(mse_v);
  study.rel_err = summarize(rel);
  study.elapsed_seconds = summarize(time);
  return study;
}

}  // namespace volrank
