#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <volrank/error.hpp>
#include <volrank/kernels.hpp>
#include <volrank/random.hpp>
#include <volrank/volume_io.hpp>

namespace volrank {
namespace {

// Modified Gram-Schmidt with one reorthogonalization pass.
Matrix random_orthonormal(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix q(rows, cols);
  for (double& v : q.data()) v = rng.uniform(-1.0, 1.0);
  for (std::size_t c = 0; c < cols; ++c) {
    double* qc = q.col(c).data();
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < c; ++p) {
        const double* qp = q.col(p).data();
        kernels::axpy(-kernels::dot(qp, qc, rows), qp, qc, rows);
      }
    }
    const double n = std::sqrt(kernels::dot(qc, qc, rows));
    if (n == 0.0) throw NumericError("degenerate random basis");
    kernels::scale(1.0 / n, qc, rows);
  }
  return q;
}

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 random_rotation(Rng& rng) {
  // Unit quaternion from three uniforms (Shoemake).
  const double u1 = rng.uniform();
  const double u2 = rng.uniform() * 2.0 * M_PI;
  const double u3 = rng.uniform() * 2.0 * M_PI;
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  const double w = a * std::sin(u2), x = a * std::cos(u2);
  const double y = b * std::sin(u3), z = b * std::cos(u3);
  return Mat3{{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
               {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
               {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}}};
}

Tensor3 blobs(Dims dims, const SyntheticParams& p, Rng& rng) {
  if (p.blobs == 0) throw ArgumentError("blobs generator needs at least one blob");
  Tensor3 x(dims);
  const std::array<double, 3> extent{static_cast<double>(dims.n1), static_cast<double>(dims.n2),
                                     static_cast<double>(dims.n3)};
  const double smallest = static_cast<double>(dims.min());
  for (std::size_t b = 0; b < p.blobs; ++b) {
    const double amp = rng.uniform(0.5, 1.0);
    std::array<double, 3> center{};
    for (int m = 0; m < 3; ++m) center[m] = rng.uniform(0.2, 0.8) * extent[m];

    if (p.isotropic) {
      // exp(-|d|^2 / 2s^2) factors into three 1-D profiles: exactly rank one.
      const double s = rng.uniform(0.08, 0.2) * smallest;
      std::array<std::vector<double>, 3> prof;
      for (int m = 0; m < 3; ++m) {
        prof[m].resize(static_cast<std::size_t>(extent[m]));
        for (std::size_t t = 0; t < prof[m].size(); ++t) {
          const double d = static_cast<double>(t) - center[m];
          prof[m][t] = std::exp(-d * d / (2.0 * s * s));
        }
      }
      for (std::size_t i = 0; i < dims.n1; ++i)
        for (std::size_t j = 0; j < dims.n2; ++j) {
          kernels::axpy(amp * prof[0][i] * prof[1][j], prof[2].data(),
                        x.data().data() + x.offset(i, j, 0), dims.n3);
        }
      continue;
    }

    const Mat3 rot = random_rotation(rng);
    std::array<double, 3> inv_var{};
    for (int m = 0; m < 3; ++m) {
      const double s = rng.uniform(0.03, 0.15) * extent[m];
      inv_var[m] = 1.0 / (s * s);
    }
    // Precision matrix Rᵀ diag(1/s^2) R.
    Mat3 prec{};
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c)
        for (int m = 0; m < 3; ++m) prec[a][c] += rot[m][a] * inv_var[m] * rot[m][c];

    for (std::size_t i = 0; i < dims.n1; ++i) {
      const double di = static_cast<double>(i) - center[0];
      for (std::size_t j = 0; j < dims.n2; ++j) {
        const double dj = static_cast<double>(j) - center[1];
        double* fiber = x.data().data() + x.offset(i, j, 0);
        const double base = prec[0][0] * di * di + 2.0 * prec[0][1] * di * dj +
                            prec[1][1] * dj * dj;
        const double lin = 2.0 * (prec[0][2] * di + prec[1][2] * dj);
        for (std::size_t k = 0; k < dims.n3; ++k) {
          const double dk = static_cast<double>(k) - center[2];
          const double q = base + lin * dk + prec[2][2] * dk * dk;
          fiber[k] += amp * std::exp(-0.5 * q);
        }
      }
    }
  }
  const double peak = *std::max_element(x.data().begin(), x.data().end());
  if (peak > 0.0) kernels::scale(1.0 / peak, x.data().data(), x.size());
  return x;
}

}  // namespace

SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "multirank") return SyntheticKind::multirank;
  if (name == "blobs") return SyntheticKind::blobs;
  if (name == "blobs_noisy") return SyntheticKind::blobs_noisy;
  throw ArgumentError("unknown volume kind '" + std::string(name) +
                      "' (expected multirank|blobs|blobs_noisy)");
}

Tensor3 gen_synthetic(SyntheticKind kind, Dims dims, const SyntheticParams& params,
                      std::uint64_t seed) {
  if (dims.n1 == 0 || dims.n2 == 0 || dims.n3 == 0) {
    throw ArgumentError("volume extents must be positive");
  }
  Rng rng(seed);
  switch (kind) {
    case SyntheticKind::multirank: {
      const std::size_t rho = params.rank;
      if (rho < 1 || rho > dims.min()) {
        throw ArgumentError("multilinear rank " + std::to_string(rho) +
                            " must lie in [1, min(dims)=" + std::to_string(dims.min()) + "]");
      }
      const Matrix q1 = random_orthonormal(rng, dims.n1, rho);
      const Matrix q2 = random_orthonormal(rng, dims.n2, rho);
      const Matrix q3 = random_orthonormal(rng, dims.n3, rho);
      Tensor3 core(Dims{rho, rho, rho});
      for (double& v : core.data()) v = rng.uniform(-1.0, 1.0);
      return tucker_product(core, q1, q2, q3);
    }
    case SyntheticKind::blobs:
      return blobs(dims, params, rng);
    case SyntheticKind::blobs_noisy: {
      Tensor3 x = blobs(dims, params, rng);
      for (double& v : x.data()) {
        v = std::clamp(v + rng.uniform(-params.noise, params.noise), 0.0, 1.0);
      }
      return x;
    }
  }
  throw ArgumentError("unknown volume kind");
}

}  // namespace volrank
