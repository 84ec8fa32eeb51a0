#pragma once

// Reconstruction quality measures and energy-based truncation selection.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <volrank/s3dsvd.hpp>
#include <volrank/tensor.hpp>

namespace volrank {

enum class Method : std::uint16_t { s3dsvd = 0, tucker = 1, cpd = 2 };

std::string_view to_string(Method m) noexcept;
/// Throws ArgumentError for an unknown name.
Method parse_method(std::string_view name);

struct MetricsReport {
  Method method = Method::s3dsvd;
  std::size_t k = 0;
  double psnr_db = 0.0;
  double mse = 0.0;
  double rel_err = 0.0;
  std::optional<double> per;  ///< s3dsvd only
  double elapsed_seconds = 0.0;
};

double mse(const Tensor3& x, const Tensor3& xhat);

/// 10 log10(I_max^2 / MSE) with I_max the maximum entry of the original x.
/// Returns +infinity when the reconstruction is exact; throws
/// DegenerateInputError when max(x) <= 0.
double psnr(const Tensor3& x, const Tensor3& xhat);

/// Same, from precomputed peak and MSE.
double psnr_from_mse(double i_max, double mse);

/// |x - xhat|_F / |x|_F; throws DegenerateInputError when |x|_F == 0.
double rel_err(const Tensor3& x, const Tensor3& xhat);

/// Share of squared coefficient energy carried by the first k coefficients
/// (index order). Throws DegenerateInputError when every coefficient is 0.
double per(const S3dModel& model, std::size_t k);

/// Smallest k with per(model, k) >= threshold; threshold in (0, 1].
std::size_t select_rank_by_per(const S3dModel& model, double threshold);

MetricsReport evaluate(Method method, std::size_t k, const Tensor3& x, const Tensor3& xhat,
                       double elapsed_seconds = 0.0);

}  // namespace volrank
