#pragma once

// Comparison methods: Tucker (HOSVD start + HOOI refinement) and CPD fitted
// by alternating least squares, plus the seeded repetition protocol used to
// report CPD with confidence intervals.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <volrank/metrics.hpp>
#include <volrank/tensor.hpp>

namespace volrank {

struct TuckerModel {
  std::array<Matrix, 3> factors;  ///< orthonormal columns, n_m x k
  Tensor3 core;                   ///< k x k x k
  /// Relative error after the HOSVD start (entry 0) and after each sweep.
  std::vector<double> fit_history;
  bool converged = false;

  std::size_t rank() const noexcept { return factors[0].cols(); }
};

struct TuckerOptions {
  std::size_t max_iters = 50;
  double tol = 1e-6;
};

TuckerModel tucker_decompose(const Tensor3& x, std::size_t k, TuckerOptions opts = {});
Tensor3 tucker_reconstruct(const TuckerModel& model);

struct CpModel {
  std::size_t rank = 0;
  std::array<Matrix, 3> factors;  ///< unit-norm columns, n_m x rank
  std::vector<double> weights;    ///< absorbed column norms, >= 0
  std::uint64_t seed = 0;
  std::size_t iterations_run = 0;
  bool converged = false;
  /// Some normal-equation solve needed a ridge term.
  bool regularized = false;
};

struct CpOptions {
  std::size_t max_iters = 300;
  double tol = 1e-6;
};

/// CP-ALS from a seeded uniform [0, 1) start. Stops once the relative error
/// changes by less than `tol` between sweeps, or after `max_iters` sweeps.
CpModel cpd_decompose(const Tensor3& x, std::size_t k, std::uint64_t seed, CpOptions opts = {});
Tensor3 cpd_reconstruct(const CpModel& model);

struct Summary {
  double mean = 0.0;
  /// Student-t 95% half-width; NaN when fewer than two samples.
  double ci_half_width = 0.0;
};

/// Two-sided 95% Student-t critical value, t_{0.975, dof}. NaN for dof == 0.
double student_t_975(std::size_t dof);
Summary summarize(std::span<const double> samples);

struct CpRun {
  std::uint64_t seed = 0;
  MetricsReport report;
  std::size_t iterations_run = 0;
  bool converged = false;
};

struct CpStudy {
  std::size_t k = 0;
  std::vector<CpRun> runs;  ///< in the order seeds were given
  Summary psnr_db;
  Summary mse;
  Summary rel_err;
  Summary elapsed_seconds;
};

/// One cpd_decompose per seed, scored against x, aggregated. Runs execute on
/// up to `threads` workers; results do not depend on the thread count.
CpStudy cpd_study(const Tensor3& x, std::size_t k, std::span<const std::uint64_t> seeds,
                  std::size_t threads = 1, CpOptions opts = {});

}  // namespace volrank
